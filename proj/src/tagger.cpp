#include "celllit/tagger.hpp"

#include <cctype>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace celllit {
namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet kDeterminers = {"a",    "an",    "the",  "this", "these", "those", "each",
                              "every", "some", "any",  "no",   "all",   "both",  "its",
                              "their", "our",  "his",  "her",  "another", "either", "neither"};
const WordSet kPrepositions = {"of",      "in",      "on",     "at",      "by",     "for",
                               "with",    "from",    "to",     "into",    "through", "via",
                               "between", "among",   "within", "without", "after",  "before",
                               "during",  "under",   "over",   "against", "across", "upon",
                               "toward",  "towards", "than",   "as",      "onto",   "versus",
                               "vs.",     "per",     "around", "along",   "beyond", "throughout",
                               "including", "following", "despite", "like"};
const WordSet kConjunctions = {"and", "or", "but", "nor"};
const WordSet kPronouns = {"we", "it", "they", "he", "she", "i", "you", "them", "us", "itself",
                           "themselves"};
const WordSet kWh = {"which", "who",   "whom",    "whose", "that",  "where",   "when", "whereas",
                     "while", "although", "because", "since", "if", "whether", "though", "unless"};
const WordSet kAux = {"is",   "are",   "was",   "were",  "be",    "been",  "being", "am",
                      "has",  "have",  "had",   "do",    "does",  "did",   "can",   "could",
                      "may",  "might", "must",  "shall", "should", "will", "would"};
const WordSet kAdverbs = {"not",  "also",  "further", "furthermore", "however", "here",
                          "there", "thus", "therefore", "only", "still", "often", "then",
                          "moreover", "additionally", "again", "already", "never", "well",
                          "yet", "even", "consequently", "subsequently"};
const WordSet kParticles = {"up", "down", "out", "off"};
const WordSet kAdjectives = {"long",    "short",   "high",    "low",     "new",     "novel",
                             "small",   "large",   "human",   "several", "many",    "various",
                             "other",   "such",    "same",    "different", "first", "second",
                             "most",    "more",    "less",    "few",     "major",   "minor",
                             "poor",    "early",   "late",    "key",     "strong",  "weak",
                             "primary", "malignant", "benign", "aberrant", "normal", "total"};
const WordSet kLyNouns = {"family", "assembly", "anomaly", "supply", "italy", "ally", "rally",
                          "polyploidy", "monopoly", "reply"};

const WordSet kVerbLemmas = {
    "express",    "overexpress", "upregulate", "downregulate", "up-regulate", "down-regulate",
    "enhance",    "inhibit",     "induce",     "increase",     "decrease",    "reduce",
    "promote",    "suppress",    "activate",   "regulate",     "mediate",     "show",
    "demonstrate", "reveal",     "indicate",   "suggest",      "contain",     "harbor",
    "harbour",    "exhibit",     "carry",      "lack",         "amplify",     "delete",
    "mutate",     "target",      "bind",       "interact",     "cause",       "lead",
    "result",     "affect",      "confer",     "correlate",    "associate",   "identify",
    "detect",     "observe",     "find",       "report",       "use",         "treat",
    "block",      "require",     "encode",     "phosphorylate", "silence",    "drive",
    "display",    "acquire",     "involve",    "trigger",      "stimulate",   "abolish",
    "attenuate",  "impair",      "restore",    "sensitize",    "confirm",     "examine",
    "investigate", "evaluate",   "analyze",    "analyse",      "compare",     "determine",
    "measure",    "establish",   "develop",    "derive",       "generate",    "produce",
    "represent",  "possess",     "retain",     "lose",         "gain",        "undergo",
    "respond",    "resist",      "modulate",   "facilitate",   "prevent",     "arrest",
    "kill",       "elevate",     "depend",     "contribute",   "exert",       "act",
    "serve",      "remain",      "become",     "appear",       "occur",       "include",
    "control",    "knock",       "abrogate",   "potentiate",   "predict",     "characterize",
    "characterise", "exploit",   "present",    "harbor",       "link",        "bear",
    "know",       "make",        "give",       "see",          "take",        "describe",
    "duplicate",  "secrete",     "stabilize",  "stabilise",    "destabilize", "destabilise",
    "dephosphorylate", "sensitise", "degrade", "adapt",        "repeat",      "methylate",
    "transfect",  "transform",   "immortalize", "immortalise", "localize",    "localise",
    "translocate", "cleave",     "ubiquitinate", "acetylate",  "recruit",     "sequester",
    "inactivate", "disrupt",     "alter",      "modify",       "convert",     "release"};

const WordSet kIrregularPast = {"found", "shown", "led", "made", "known", "given", "seen",
                                "taken", "bound", "lost", "bore", "borne", "became", "done"};

bool is_punct_token(std::string_view s) {
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80)
      return false;
  }
  return true;
}

bool is_number(std::string_view s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ',' && c != '%')
      return false;
  }
  return true;
}

bool is_identifier(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') return true;
    if (i > 0 && c >= 'A' && c <= 'Z') return true;
  }
  return false;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// A number closing a name ("Detroit 562") does not open a noun phrase.
bool nominal_context(Tag prev, Tag prev2) {
  return prev == Tag::Det || prev == Tag::Adj || (prev == Tag::Num && prev2 != Tag::Noun);
}

Tag tag_verb_candidate(const Token& t, Tag prev, Tag prev2, bool sentence_start) {
  const std::string& lower = t.text_cased;
  if (ends_with(lower, "ing")) {
    if (prev == Tag::Det || prev == Tag::Adj) return Tag::Adj;
    return prev == Tag::Aux ? Tag::Verb : Tag::NonFinite;
  }
  if (nominal_context(prev, prev2)) return Tag::Noun;
  if (prev == Tag::Prep) {
    // "to induce": infinitive; "of expression": nominal.
    return Tag::Noun;
  }
  bool past = ends_with(lower, "ed") || kIrregularPast.contains(lower);
  if (past) {
    if (sentence_start) return Tag::Adj;
    return Tag::Verb;
  }
  if (sentence_start && lower == t.text_lemma) return Tag::Noun;
  return Tag::Verb;
}

}  // namespace

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::Noun: return "NOUN";
    case Tag::Adj: return "ADJ";
    case Tag::Num: return "NUM";
    case Tag::Det: return "DET";
    case Tag::Verb: return "VERB";
    case Tag::Aux: return "AUX";
    case Tag::Adv: return "ADV";
    case Tag::Prep: return "PREP";
    case Tag::Conj: return "CONJ";
    case Tag::Pron: return "PRON";
    case Tag::Wh: return "WH";
    case Tag::Particle: return "PRT";
    case Tag::NonFinite: return "NONFIN";
    case Tag::Punct: return "PUNCT";
  }
  return "?";
}

bool is_verb_lemma(std::string_view lemma) { return kVerbLemmas.contains(lemma); }

std::vector<Tag> tag_sentence(std::span<const Token> tokens) {
  std::vector<Tag> tags;
  tags.reserve(tokens.size());
  Tag prev = Tag::Punct;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    const std::string& lower = t.text_cased;
    const bool at_start = i == 0;
    Tag tag;
    if (is_punct_token(t.text_raw)) {
      tag = Tag::Punct;
    } else if (is_number(t.text_raw)) {
      tag = Tag::Num;
    } else if (lower == "to" && i + 1 < tokens.size() && is_verb_lemma(tokens[i + 1].text_lemma) &&
               tokens[i + 1].text_cased == tokens[i + 1].text_lemma) {
      tag = Tag::NonFinite;
    } else if (prev == Tag::NonFinite && i > 0 && tokens[i - 1].text_cased == "to") {
      tag = Tag::NonFinite;
    } else if (kDeterminers.contains(lower)) {
      tag = Tag::Det;
    } else if (kConjunctions.contains(lower)) {
      tag = Tag::Conj;
    } else if (kAux.contains(lower)) {
      tag = Tag::Aux;
    } else if (kWh.contains(lower)) {
      tag = Tag::Wh;
    } else if (kPronouns.contains(lower)) {
      tag = Tag::Pron;
    } else if (kParticles.contains(lower) && (prev == Tag::Verb || prev == Tag::Particle)) {
      tag = Tag::Particle;
    } else if (kPrepositions.contains(lower)) {
      tag = Tag::Prep;
    } else if (kAdverbs.contains(lower)) {
      tag = Tag::Adv;
    } else if (is_identifier(t.text_raw)) {
      tag = Tag::Noun;
    } else if (is_verb_lemma(t.text_lemma) && t.text_lemma != "be") {
      tag = tag_verb_candidate(t, prev, i >= 2 ? tags[i - 2] : Tag::Punct, at_start);
    } else if (kAdjectives.contains(lower)) {
      tag = Tag::Adj;
    } else if (lower.size() > 4 && ends_with(lower, "ly") && !kLyNouns.contains(lower)) {
      tag = Tag::Adv;
    } else if (ends_with(lower, "ed") && lower.size() > 4) {
      tag = prev == Tag::Aux ? Tag::Verb : Tag::Adj;
    } else if (ends_with(lower, "ing") && lower.size() > 5) {
      if (prev == Tag::Det || prev == Tag::Adj) {
        tag = Tag::Adj;
      } else {
        tag = prev == Tag::Aux ? Tag::Verb : Tag::NonFinite;
      }
    } else {
      static constexpr std::string_view kAdjSuffixes[] = {"al", "ic", "ive", "ous", "ant",
                                                          "ible", "able", "ar"};
      tag = Tag::Noun;
      for (auto s : kAdjSuffixes) {
        if (lower.size() > s.size() + 2 && ends_with(lower, s)) {
          tag = Tag::Adj;
          break;
        }
      }
    }
    tags.push_back(tag);
    prev = tag;
  }
  return tags;
}

}  // namespace celllit
