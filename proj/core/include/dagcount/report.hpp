#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dagcount {

/// Two-significant-digit scientific rendering used in report tables:
/// 59000000000 -> "5.9e10", 16 -> "1.6e1", 0 -> "0". Rounds half away
/// from zero on the third digit.
std::string render_scientific2(const mpz_class& n);

/// Decimal approximation of a rational to the given significant digits,
/// trailing fraction zeros stripped: 3/8 -> "0.375", 2/1 -> "2".
std::string render_decimal(const mpq_class& q, int significant_digits = 4);

/// FNV-1a 64-bit digest as 16 lowercase hex digits; fingerprints inputs in
/// run reports.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace dagcount
