#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace evosym {

using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::optional<long> as_long(const Rat& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p()) return std::nullopt;
  return r.get_num().get_si();
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// r^n for integer n (n may be negative; r must be nonzero then).
inline Rat rat_pow(const Rat& r, long n) {
  if (n == 0) return Rat(1);
  bool inv = n < 0;
  unsigned long e = inv ? static_cast<unsigned long>(-(n + 1)) + 1ul : static_cast<unsigned long>(n);
  Rat num, den;
  mpz_pow_ui(num.get_num_mpz_t(), r.get_num_mpz_t(), e);
  mpz_set_ui(num.get_den_mpz_t(), 1);
  mpz_pow_ui(den.get_num_mpz_t(), r.get_den_mpz_t(), e);
  mpz_set_ui(den.get_den_mpz_t(), 1);
  if (inv) {
    if (num == 0) throw std::domain_error("0 raised to negative power");
    Rat out = den / num;
    out.canonicalize();
    return out;
  }
  Rat out = num / den;
  out.canonicalize();
  return out;
}

/// Exact n-th root if it exists: r = s^n with s rational.
inline std::optional<Rat> rat_root(const Rat& r, unsigned long n) {
  if (n == 0) return std::nullopt;
  if (sgn(r) < 0 && n % 2 == 0) return std::nullopt;
  mpz_class num_root, den_root;
  int num_exact = mpz_root(num_root.get_mpz_t(), r.get_num_mpz_t(), n);
  int den_exact = mpz_root(den_root.get_mpz_t(), r.get_den_mpz_t(), n);
  if (!num_exact || !den_exact) return std::nullopt;
  Rat out(num_root, den_root);
  out.canonicalize();
  return out;
}

}  // namespace evosym
