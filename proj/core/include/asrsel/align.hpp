#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace asrsel {

using TokenSpan = std::span<const std::string>;

/// Decomposition of a minimum word-level edit script.
struct EditSummary {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t matches = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }

  bool operator==(const EditSummary&) const = default;
};

/// Unit-cost Levenshtein alignment of two token sequences.
///
/// The S/D/I split of a minimum-cost script is not unique; ties are broken as
/// if tracing back from the end preferring match, then substitution, then
/// deletion (reference token dropped), then insertion. Runs in O(|ref|·|hyp|)
/// time with two rows of memory.
EditSummary edit_align(TokenSpan ref, TokenSpan hyp);

/// distance / |ref|. Can exceed 1 when the hypothesis has many insertions.
/// Throws asrsel::Error ("undefined WER") for an empty reference.
double wer(TokenSpan ref, TokenSpan hyp);

/// Disagreement between the two recognizers: the strong hypothesis is the
/// reference, so the result is distance(strong, weak) / max(|strong|, 1).
/// Two empty hypotheses give 0.
double divergence(TokenSpan weak, TokenSpan strong);

}  // namespace asrsel
