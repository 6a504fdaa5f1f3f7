#include "dagcount/report.hpp"

#include <cstdint>

namespace dagcount {

std::string render_scientific2(const mpz_class& n) {
  if (n == 0) return "0";
  mpz_class abs_n = abs(n);
  std::string digits = abs_n.get_str();
  int exponent = static_cast<int>(digits.size()) - 1;
  int two = (digits[0] - '0') * 10 + (digits.size() > 1 ? digits[1] - '0' : 0);
  if (digits.size() > 2 && digits[2] >= '5') ++two;
  if (two == 100) {
    two = 10;
    ++exponent;
  }
  std::string out;
  if (n < 0) out += '-';
  out += static_cast<char>('0' + two / 10);
  out += '.';
  out += static_cast<char>('0' + two % 10);
  out += 'e';
  out += std::to_string(exponent);
  return out;
}

std::string render_decimal(const mpq_class& q, int significant_digits) {
  const int k = significant_digits;
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();  // canonical: positive
  if (num == 0) return "0";

  // Exponent e with den*10^(e-1) <= num < den*10^e, so the value reads
  // 0.d1..dk * 10^e.
  auto pow10 = [](int p) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(p));
    return r;
  };
  auto value_reaches = [&](int exp) {  // num/den >= 10^exp, exp of any sign
    return exp >= 0 ? num >= den * pow10(exp) : num * pow10(-exp) >= den;
  };
  int e = static_cast<int>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
          static_cast<int>(mpz_sizeinbase(den.get_mpz_t(), 10)) + 1;
  while (value_reaches(e)) ++e;
  while (!value_reaches(e - 1)) --e;

  // First k significant digits, rounded half away from zero.
  mpz_class scaled_num = k >= e ? mpz_class(num * pow10(k - e)) : num;
  mpz_class scaled_den = k >= e ? den : mpz_class(den * pow10(e - k));
  mpz_class digits_val = scaled_num / scaled_den;
  if (2 * (scaled_num - digits_val * scaled_den) >= scaled_den) ++digits_val;
  if (digits_val == pow10(k)) {
    digits_val = pow10(k - 1);
    ++e;
  }
  std::string digits = digits_val.get_str();

  std::string out;
  if (q < 0) out += '-';
  if (e <= 0) {
    out += "0.";
    out.append(static_cast<size_t>(-e), '0');
    out += digits;
  } else if (e >= k) {
    out += digits;
    out.append(static_cast<size_t>(e - k), '0');
    return out;  // pure integer, nothing to strip
  } else {
    out += digits.substr(0, static_cast<size_t>(e));
    out += '.';
    out += digits.substr(static_cast<size_t>(e));
  }
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace dagcount
