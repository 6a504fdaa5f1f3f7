#include "dagcount/synthetic.hpp"

#include <random>
#include <vector>

namespace dagcount {

SyntheticDoc generate_synthetic_documentation(uint64_t seed, size_t target_codes) {
  std::mt19937_64 rng(seed);
  SyntheticDoc doc;
  doc.expected_count = 1;
  doc.text = "# synthetic block-structured documentation, seed " +
             std::to_string(seed) + "\n";

  std::uniform_int_distribution<int> kind_pick(0, 9);
  std::uniform_int_distribution<size_t> group_size(2, 8);
  std::uniform_int_distribution<size_t> free_size(1, 6);

  while (doc.code_count < target_codes) {
    size_t block = doc.block_count++;
    int kind = kind_pick(rng);  // 0-3 one-of-k, 4-6 chain, 7-9 free
    size_t k = kind < 7 ? group_size(rng) : free_size(rng);

    std::vector<std::string> codes(k);
    std::string codes_line = "codes:";
    for (size_t j = 0; j < k; ++j) {
      codes[j] = "b" + std::to_string(block) + "_c" + std::to_string(j + 1);
      codes_line += " " + codes[j];
    }
    doc.text += codes_line + "\n";
    doc.code_count += k;

    if (kind < 4) {
      // One-of-k: exactly one code of the block may be chosen -> k models.
      std::string any = "cc: true -> " + codes[0];
      for (size_t j = 1; j < k; ++j) any += " | " + codes[j];
      doc.text += any + "\n";
      for (size_t j = 0; j < k; ++j) {
        std::string exclusive = "cc: " + codes[j] + " ->";
        bool first = true;
        for (size_t m = 0; m < k; ++m) {
          if (m == j) continue;
          exclusive += (first ? " !" : " & !") + codes[m];
          first = false;
        }
        doc.text += exclusive + "\n";
      }
      // Entailed by the one-of-k structure: all others absent forces the
      // first code, so this supplementary rule changes nothing.
      if (k >= 2 && rng() % 2 == 0) {
        std::string body = "!" + codes[1];
        for (size_t m = 2; m < k; ++m) body += " & !" + codes[m];
        doc.text += "sr: " + body + " -> " + codes[0] + "\n";
      }
      doc.expected_count *= static_cast<unsigned long>(k);
    } else if (kind < 7) {
      // Require chain: code j+1 requires code j -> the models are the k+1
      // downward-closed prefixes.
      for (size_t j = 1; j < k; ++j)
        doc.text += "cc: " + codes[j] + " -> " + codes[j - 1] + "\n";
      if (rng() % 2 == 0)  // duplicates one chain link; entailed
        doc.text += "sr: " + codes[k - 1] + " -> " + codes[k - 2] + "\n";
      doc.expected_count *= static_cast<unsigned long>(k + 1);
    } else {
      // Unconstrained block: 2^k models, nothing to emit.
      doc.expected_count <<= k;
    }

    if (rng() % 4 == 0) {
      // A BOM position over this block; selection conditions do not affect
      // the documentation's model count.
      std::string position = "p" + std::to_string(block);
      for (size_t j = 0; j < k; ++j)
        doc.text += "part: " + position + "." + std::to_string((j + 1) * 10) + " : " +
                    codes[j] + "\n";
      std::string none = "!" + codes[0];
      for (size_t m = 1; m < k; ++m) none += " & !" + codes[m];
      doc.text += "part: " + position + ".999 : " + none + "\n";
    }
  }
  return doc;
}

}  // namespace dagcount
