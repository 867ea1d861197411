#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "celllit/corpus.hpp"

namespace celllit {

// Coarse part-of-speech classes used by the triple rules.
enum class Tag {
  Noun,
  Adj,
  Num,
  Det,
  Verb,      // finite or participial main verb
  Aux,       // be / have / do / modals
  Adv,
  Prep,
  Conj,      // coordinating conjunction
  Pron,
  Wh,        // relative pronouns and subordinators
  Particle,  // verb particles: up, down, out, off
  NonFinite, // gerunds and to-infinitives
  Punct,
};

std::string_view to_string(Tag t);

// Lexicon plus suffix heuristics, left to right over one sentence.
std::vector<Tag> tag_sentence(std::span<const Token> tokens);

bool is_verb_lemma(std::string_view lemma);

}  // namespace celllit
