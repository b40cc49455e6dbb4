#include "traceiso/field.hpp"

#include <charconv>
#include <ostream>

namespace traceiso {

namespace {

using u128 = unsigned __int128;

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1 % n;
  a %= n;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>(static_cast<u128>(r) * a % n);
    a = static_cast<std::uint64_t>(static_cast<u128>(a) * a % n);
    e >>= 1;
  }
  return r;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("not a decimal integer: '" + s + "'");
  return v;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = static_cast<std::uint64_t>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(p), inv_(1.0L / static_cast<long double>(p)), mersenne_(p == kMersenne61) {
  if (p < 3 || p >= (std::uint64_t{1} << 62))
    throw InvalidModulus("modulus must be an odd prime in [3, 2^62)");
  if (!is_prime_u64(p)) throw InvalidModulus("modulus " + std::to_string(p) + " is not prime");
}

PrimeModulus PrimeModulus::parse(const std::string& decimal) {
  std::uint64_t p = 0;
  try {
    p = parse_u64(decimal);
  } catch (const std::invalid_argument&) {
    throw InvalidModulus("modulus is not a decimal integer: '" + decimal + "'");
  }
  return PrimeModulus(p);
}

namespace detail {
const PrimeModulus*& active_modulus_slot() {
  static const PrimeModulus kDefault;
  thread_local const PrimeModulus* slot = &kDefault;
  return slot;
}
}  // namespace detail

ModulusScope::ModulusScope(const PrimeModulus& m) : held_(m), previous_(detail::active_modulus_slot()) {
  detail::active_modulus_slot() = &held_;
}

ModulusScope::~ModulusScope() { detail::active_modulus_slot() = previous_; }

Fp Fp::parse(const std::string& decimal) {
  std::uint64_t v = parse_u64(decimal);
  if (v >= current_modulus().value()) throw std::invalid_argument("residue out of range: " + decimal);
  return from_uint(v);
}

Fp Fp::inverse() const {
  if (v_ == 0) throw DivisionByZero();
  const auto p = static_cast<std::int64_t>(current_modulus().value());
  std::int64_t a = static_cast<std::int64_t>(v_), b = p, x0 = 1, x1 = 0;
  while (b) {
    std::int64_t q = a / b;
    std::int64_t t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  Fp r;
  r.v_ = static_cast<std::uint64_t>(x0 < 0 ? x0 + p : x0);
  return r;
}

Fp Fp::pow(std::uint64_t e) const {
  Fp r(1), a = *this;
  while (e) {
    if (e & 1) r *= a;
    a *= a;
    e >>= 1;
  }
  return r;
}

std::ostream& operator<<(std::ostream& os, Fp x) { return os << x.value(); }

bool is_square(Fp a) {
  if (a.is_zero()) return true;
  return a.pow((current_modulus().value() - 1) / 2) == Fp(1);
}

Fp sqrt(Fp a) {
  if (a.is_zero()) return a;
  if (!is_square(a)) throw std::domain_error("not a quadratic residue");
  const std::uint64_t p = current_modulus().value();
  if (p % 4 == 3) return a.pow((p + 1) / 4);
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  Fp z(2);
  while (is_square(z)) z += Fp(1);
  Fp c = z.pow(q), t = a.pow(q), r = a.pow((q + 1) / 2);
  int m = s;
  while (t != Fp(1)) {
    int i = 0;
    Fp t2 = t;
    while (t2 != Fp(1)) {
      t2 *= t2;
      ++i;
    }
    Fp b = c;
    for (int j = 0; j < m - i - 1; ++j) b *= b;
    m = i;
    c = b * b;
    t *= c;
    r *= b;
  }
  return r;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

Fp Rng::uniform() { return Fp::from_uint(below(current_modulus().value())); }

Fp Rng::uniform_nonzero() { return Fp::from_uint(1 + below(current_modulus().value() - 1)); }

std::vector<Fp> Rng::uniform_vector(std::size_t count) {
  std::vector<Fp> v(count);
  for (auto& x : v) x = uniform();
  return v;
}

}  // namespace traceiso
