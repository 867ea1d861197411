#include <string>
#include <string_view>
#include <unordered_map>

#include "celllit/corpus.hpp"

namespace celllit {
namespace {

const std::unordered_map<std::string_view, std::string_view>& exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      {"is", "be"},           {"are", "be"},          {"was", "be"},
      {"were", "be"},         {"been", "be"},         {"being", "be"},
      {"has", "have"},        {"had", "have"},        {"having", "have"},
      {"does", "do"},         {"did", "do"},          {"done", "do"},
      {"shown", "show"},      {"found", "find"},      {"made", "make"},
      {"led", "lead"},        {"known", "know"},      {"given", "give"},
      {"taken", "take"},      {"seen", "see"},        {"bound", "bind"},
      {"mice", "mouse"},      {"children", "child"},  {"women", "woman"},
      {"men", "man"},         {"feet", "foot"},       {"teeth", "tooth"},
      {"data", "data"},       {"analyses", "analysis"}, {"metastases", "metastasis"},
      {"diagnoses", "diagnosis"}, {"prognoses", "prognosis"}, {"neoplasms", "neoplasm"},
      {"species", "species"}, {"series", "series"},   {"during", "during"},
      {"bring", "bring"},     {"thing", "thing"},     {"string", "string"},
      {"nothing", "nothing"}, {"something", "something"}, {"morning", "morning"},
      {"deleted", "delete"},  {"deleting", "delete"}, {"targeted", "target"},
      {"targeting", "target"}, {"its", "its"},        {"this", "this"},
      {"thus", "thus"},       {"less", "less"},       {"ras", "ras"},
      {"nucleus", "nucleus"}, {"nuclei", "nucleus"},  {"carcinomata", "carcinoma"},
      {"lymphomata", "lymphoma"}, {"indices", "index"}, {"matrices", "matrix"},
      {"vertebrae", "vertebra"}, {"bacteria", "bacterium"},
  };
  return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  for (char c : s) {
    if (is_vowel(c) || c == 'y') return true;
  }
  return false;
}

bool is_identifier(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') return true;
    if (i > 0 && c >= 'A' && c <= 'Z') return true;
  }
  return false;
}

// Restores a stem left by removing -ed / -ing.
std::string restore_stem(std::string stem) {
  if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2] &&
      !is_vowel(stem.back()) && stem.back() != 'l' && stem.back() != 's' && stem.back() != 'z') {
    stem.pop_back();
    return stem;
  }
  for (std::string_view e : {"at", "bl", "iz", "is", "ys", "c", "g", "v", "u", "z", "rs", "ns", "as", "os", "us"}) {
    if (ends_with(stem, e)) {
      if (ends_with(stem, "ss")) break;
      return stem + "e";
    }
  }
  return stem;
}

// One rewrite step; returns the input when no rule applies.
std::string step(const std::string& w) {
  if (auto it = exceptions().find(w); it != exceptions().end()) return std::string(it->second);
  if (w.size() <= 3) return w;
  for (char c : w) {
    if (!((c >= 'a' && c <= 'z') || c == '-')) return w;
  }
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is") || ends_with(w, "ous"))
    return w;
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  for (std::string_view s : {"ches", "shes", "xes", "zzes"}) {
    if (ends_with(w, s)) return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "s") && w.size() >= 4) return w.substr(0, w.size() - 1);
  if (ends_with(w, "ied") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "eed")) return w;
  if (ends_with(w, "ed")) {
    std::string stem = w.substr(0, w.size() - 2);
    if (stem.size() >= 3 && has_vowel(stem)) return restore_stem(std::move(stem));
    return w;
  }
  if (ends_with(w, "ing")) {
    std::string stem = w.substr(0, w.size() - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return restore_stem(std::move(stem));
    return w;
  }
  return w;
}

}  // namespace

std::string lemmatize(std::string_view token_text) {
  if (token_text.empty() || is_identifier(token_text)) return std::string(token_text);
  std::string current = to_lower_ascii(token_text);
  // Iterate to a fixed point so that lemmatize is idempotent.
  // Suffix rules shorten the word and exception targets are fixed points.
  for (;;) {
    std::string next = step(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace celllit
