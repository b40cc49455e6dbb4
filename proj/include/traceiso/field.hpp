#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace traceiso {

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero in F_p") {}
};

struct InvalidModulus : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool is_prime_u64(std::uint64_t n);

/// Odd prime modulus below 2^62 with precomputed reduction data.
class PrimeModulus {
 public:
  static constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

  explicit PrimeModulus(std::uint64_t p = kMersenne61);
  static PrimeModulus parse(const std::string& decimal);

  std::uint64_t value() const { return p_; }
  long double reciprocal() const { return inv_; }
  bool mersenne61() const { return mersenne_; }
  std::string to_string() const { return std::to_string(p_); }

  friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
  long double inv_;
  bool mersenne_;
};

namespace detail {
const PrimeModulus*& active_modulus_slot();
}

/// Modulus in effect on the calling thread. Defaults to 2^61 - 1.
inline const PrimeModulus& current_modulus() { return *detail::active_modulus_slot(); }

/// Installs a modulus for the lifetime of the scope (per thread, nestable).
class ModulusScope {
 public:
  explicit ModulusScope(const PrimeModulus& m);
  ~ModulusScope();
  ModulusScope(const ModulusScope&) = delete;
  ModulusScope& operator=(const ModulusScope&) = delete;

 private:
  PrimeModulus held_;
  const PrimeModulus* previous_;
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, const PrimeModulus& m) {
  const std::uint64_t p = m.value();
  if (m.mersenne61()) {
    unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = (static_cast<std::uint64_t>(x) & PrimeModulus::kMersenne61) +
                      static_cast<std::uint64_t>(x >> 61);
    return r >= p ? r - p : r;
  }
  auto q = static_cast<std::uint64_t>(static_cast<long double>(a) * b * m.reciprocal());
  auto r = static_cast<std::int64_t>(a * b - q * p);
  while (r < 0) r += static_cast<std::int64_t>(p);
  while (r >= static_cast<std::int64_t>(p)) r -= static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r);
}

}  // namespace detail

/// Element of F_p for the thread's current modulus.
class Fp {
 public:
  constexpr Fp() = default;
  Fp(int v) : Fp(static_cast<long long>(v)) {}
  Fp(long v) : Fp(static_cast<long long>(v)) {}
  Fp(long long v) {
    const auto p = static_cast<long long>(current_modulus().value());
    long long r = v % p;
    v_ = static_cast<std::uint64_t>(r < 0 ? r + p : r);
  }
  static Fp from_uint(std::uint64_t v) {
    Fp x;
    x.v_ = v % current_modulus().value();
    return x;
  }
  static Fp parse(const std::string& decimal);

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  std::string to_string() const { return std::to_string(v_); }

  Fp& operator+=(Fp o) {
    const std::uint64_t p = current_modulus().value();
    v_ += o.v_;
    if (v_ >= p) v_ -= p;
    return *this;
  }
  Fp& operator-=(Fp o) {
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + current_modulus().value() - o.v_;
    return *this;
  }
  Fp& operator*=(Fp o) {
    v_ = detail::mulmod(v_, o.v_, current_modulus());
    return *this;
  }
  Fp& operator/=(Fp o) { return *this *= o.inverse(); }

  friend Fp operator+(Fp a, Fp b) { return a += b; }
  friend Fp operator-(Fp a, Fp b) { return a -= b; }
  friend Fp operator*(Fp a, Fp b) { return a *= b; }
  friend Fp operator/(Fp a, Fp b) { return a /= b; }
  Fp operator-() const { return Fp() - *this; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  Fp inverse() const;
  Fp pow(std::uint64_t e) const;

 private:
  std::uint64_t v_ = 0;
};

std::ostream& operator<<(std::ostream& os, Fp x);

bool is_square(Fp a);
/// Square root (Tonelli-Shanks); throws std::domain_error for non-residues.
Fp sqrt(Fp a);

/// Seeded generator drawing uniform field elements.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  Fp uniform();
  Fp uniform_nonzero();
  std::uint64_t below(std::uint64_t bound);
  std::vector<Fp> uniform_vector(std::size_t count);
  Rng split() { return Rng(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace traceiso

namespace Eigen {

template <>
struct NumTraits<traceiso::Fp> : GenericNumTraits<traceiso::Fp> {
  using Real = traceiso::Fp;
  using NonInteger = traceiso::Fp;
  using Literal = traceiso::Fp;
  using Nested = traceiso::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline int digits10() { return 19; }
  static inline traceiso::Fp epsilon() { return traceiso::Fp(0); }
  static inline traceiso::Fp dummy_precision() { return traceiso::Fp(0); }
  static inline traceiso::Fp highest() { return traceiso::Fp(-1); }
  static inline traceiso::Fp lowest() { return traceiso::Fp(0); }
};

}  // namespace Eigen
