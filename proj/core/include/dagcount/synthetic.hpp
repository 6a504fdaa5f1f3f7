#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace dagcount {

/// A generated rules file together with its analytically known model
/// count. The text parses with parse_documentation and the count equals
/// totalConfigurations exactly.
struct SyntheticDoc {
  std::string text;
  mpz_class expected_count;
  size_t code_count = 0;
  size_t block_count = 0;
};

/// Deterministically generates block-structured documentation: variable-
/// disjoint code blocks that are either one-of-k groups (k models), require
/// chains (k+1 models) or unconstrained (2^k models). The expected count is
/// the product over blocks. Some blocks carry entailed supplementary rules
/// and part lines, which exercise the full format without changing the
/// count. Identical seeds and sizes give identical text.
SyntheticDoc generate_synthetic_documentation(uint64_t seed, size_t target_codes = 1500);

}  // namespace dagcount
