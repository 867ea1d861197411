#include "celllit/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "celllit/error.hpp"

namespace celllit {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_leading_punct(char c) {
  return c == '(' || c == '[' || c == '{' || c == '"' || c == '\'' || c == '`';
}

bool is_trailing_punct(char c) {
  switch (c) {
    case ')': case ']': case '}': case '"': case '\'':
    case ',': case ';': case ':': case '.': case '!': case '?':
      return true;
    default:
      return false;
  }
}

bool is_terminal(std::string_view t) { return t == "." || t == "!" || t == "?"; }

bool is_closer(std::string_view t) {
  return t == ")" || t == "]" || t == "}" || t == "\"" || t == "'";
}

constexpr std::array<std::string_view, 18> kAbbreviations = {
    "al.",  "etc.", "vs.", "fig.", "figs.", "approx.", "ca.", "cf.", "resp.",
    "no.",  "nos.", "dr.", "e.g.", "i.e.", "sp.",   "spp.",  "viz.", "et."};

// Dotted initialisms such as "U.S." are kept whole.
bool is_dotted_initialism(std::string_view s) {
  if (s.size() < 4 || s.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isalpha(c) || s[i + 1] != '.') return false;
  }
  return true;
}

bool keeps_period(std::string_view core_with_period) {
  std::string lower = to_lower_ascii(core_with_period);
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end())
    return true;
  return is_dotted_initialism(core_with_period);
}

// Closing bracket is peeled only when it has no partner inside the core.
bool closer_unbalanced(std::string_view core, char close) {
  char open = close == ')' ? '(' : close == ']' ? '[' : '{';
  auto opens = std::count(core.begin(), core.end(), open);
  auto closes = std::count(core.begin(), core.end(), close);
  return opens < closes;
}

void split_chunk(std::string_view text, std::size_t a, std::size_t b,
                 std::vector<std::pair<std::size_t, std::size_t>>& out) {
  while (a < b && is_leading_punct(text[a])) {
    out.emplace_back(a, a + 1);
    ++a;
  }
  std::vector<std::pair<std::size_t, std::size_t>> tail;
  while (b > a && is_trailing_punct(text[b - 1])) {
    char c = text[b - 1];
    std::string_view core = text.substr(a, b - a);
    if (c == '.' && b - a > 1 && keeps_period(core)) break;
    if ((c == ')' || c == ']' || c == '}') && !closer_unbalanced(core, c)) break;
    tail.emplace_back(b - 1, b);
    --b;
  }
  if (b > a) out.emplace_back(a, b);
  out.insert(out.end(), tail.rbegin(), tail.rend());
}

Tokenization tokenize_impl(std::string_view text, bool single_sentence) {
  Tokenization result;
  std::vector<std::pair<std::size_t, std::size_t>> offsets;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) split_chunk(text, start, i, offsets);
  }
  result.tokens.reserve(offsets.size());
  for (const auto& [s, e] : offsets) {
    Token t;
    t.index = static_cast<int>(result.tokens.size());
    t.text_raw = std::string(text.substr(s, e - s));
    t.text_cased = to_lower_ascii(t.text_raw);
    t.text_lemma = lemmatize(t.text_raw);
    t.char_start = s;
    t.char_end = e;
    result.tokens.push_back(std::move(t));
  }
  const int n = static_cast<int>(result.tokens.size());
  if (n == 0) return result;
  if (single_sentence) {
    result.sentences.push_back({0, n});
    return result;
  }
  int sentence_start = 0;
  for (int k = 0; k < n; ++k) {
    if (!is_terminal(result.tokens[k].text_raw)) continue;
    int end = k + 1;
    while (end < n && is_closer(result.tokens[end].text_raw)) ++end;
    if (end < n) {
      result.sentences.push_back({sentence_start, end});
      sentence_start = end;
    }
    k = end - 1;
  }
  result.sentences.push_back({sentence_start, n});
  return result;
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Tokenization tokenize(std::string_view text) { return tokenize_impl(text, false); }

Document::Document(std::string doc_id, std::string title, std::string abstract)
    : doc_id_(std::move(doc_id)), title_(std::move(title)), abstract_(std::move(abstract)) {
  Tokenization head = tokenize_impl(title_, true);
  Tokenization body = tokenize(abstract_);
  std::size_t shift = 0;
  if (!title_.empty()) {
    text_ = title_;
    if (!abstract_.empty()) text_ += ' ';
    shift = text_.size();
  }
  text_ += abstract_;

  tokens_ = std::move(head.tokens);
  sentences_ = std::move(head.sentences);
  title_tokens_ = static_cast<int>(tokens_.size());
  title_sentences_ = static_cast<int>(sentences_.size());
  for (auto& t : body.tokens) {
    t.index += title_tokens_;
    t.char_start += shift;
    t.char_end += shift;
    tokens_.push_back(std::move(t));
  }
  for (auto s : body.sentences) {
    sentences_.push_back({s.start + title_tokens_, s.end + title_tokens_});
  }
}

std::span<const Token> Document::body_tokens() const {
  return std::span<const Token>(tokens_).subspan(title_tokens_);
}

std::span<const SentenceSpan> Document::body_sentences() const {
  return std::span<const SentenceSpan>(sentences_).subspan(title_sentences_);
}

int Document::sentence_of(int token_index) const {
  auto it = std::upper_bound(sentences_.begin(), sentences_.end(), token_index,
                             [](int idx, const SentenceSpan& s) { return idx < s.end; });
  if (it == sentences_.end() || token_index < it->start) return -1;
  return static_cast<int>(it - sentences_.begin());
}

std::string_view Document::span_text(TokenSpan span) const {
  if (span.empty()) return {};
  std::size_t s = tokens_.at(span.start).char_start;
  std::size_t e = tokens_.at(span.end - 1).char_end;
  return std::string_view(text_).substr(s, e - s);
}

CorpusLoad ingest_corpus_stream(std::istream& in) {
  CorpusLoad load;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      load.skipped.push_back({line_no, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    std::string missing;
    for (const char* field : {"doc_id", "title", "abstract"}) {
      if (!record.is_object() || !record.contains(field) || !record[field].is_string()) {
        missing = field;
        break;
      }
    }
    if (!missing.empty()) {
      load.skipped.push_back({line_no, "missing or non-string field '" + missing + "'"});
      continue;
    }
    std::string doc_id = record["doc_id"].get<std::string>();
    if (doc_id.empty()) {
      load.skipped.push_back({line_no, "empty doc_id"});
      continue;
    }
    if (auto [it, inserted] = seen.emplace(doc_id, line_no); !inserted) {
      throw FormatError("duplicate doc_id '" + doc_id + "' at lines " +
                        std::to_string(it->second) + " and " + std::to_string(line_no));
    }
    std::string abstract = record["abstract"].get<std::string>();
    if (abstract.empty()) {
      load.warnings.push_back("line " + std::to_string(line_no) + ": doc_id '" + doc_id +
                              "' has an empty abstract");
    }
    load.documents.emplace_back(std::move(doc_id), record["title"].get<std::string>(),
                                std::move(abstract));
  }
  std::sort(load.documents.begin(), load.documents.end(),
            [](const Document& a, const Document& b) { return a.doc_id() < b.doc_id(); });
  return load;
}

CorpusLoad ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus file " + path.string());
  return ingest_corpus_stream(in);
}

nlohmann::json to_json(const Document& doc) {
  nlohmann::json tokens = nlohmann::json::array();
  for (const auto& t : doc.tokens()) {
    tokens.push_back({t.char_start, t.char_end, t.text_raw, t.text_cased, t.text_lemma});
  }
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : doc.sentences()) sentences.push_back({s.start, s.end});
  return {{"doc_id", doc.doc_id()},
          {"title", doc.title()},
          {"abstract", doc.abstract()},
          {"tokens", std::move(tokens)},
          {"sentences", std::move(sentences)}};
}

}  // namespace celllit
