#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace celllit {

struct Token {
  int index = 0;
  std::string text_raw;
  std::string text_cased;
  std::string text_lemma;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Token&) const = default;
};

// Half-open range of token indices.
struct TokenSpan {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool overlaps(const TokenSpan& o) const { return start < o.end && o.start < end; }
  bool contains(const TokenSpan& o) const { return start <= o.start && o.end <= end; }

  auto operator<=>(const TokenSpan&) const = default;
};

using SentenceSpan = TokenSpan;

struct Tokenization {
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;
};

// A tokenized abstract. The title (when present) is sentence 0 and the
// tokenized text is `title + " " + abstract`; all offsets index into text().
class Document {
 public:
  Document() = default;
  Document(std::string doc_id, std::string title, std::string abstract);

  const std::string& doc_id() const { return doc_id_; }
  const std::string& title() const { return title_; }
  const std::string& abstract() const { return abstract_; }
  const std::string& text() const { return text_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<SentenceSpan>& sentences() const { return sentences_; }

  // Tokens and sentences that belong to the abstract body (title excluded).
  std::span<const Token> body_tokens() const;
  std::span<const SentenceSpan> body_sentences() const;
  int title_sentence_count() const { return title_sentences_; }

  // Sentence index containing token `token_index`, or -1.
  int sentence_of(int token_index) const;

  // Raw text between the first and last token of the span.
  std::string_view span_text(TokenSpan span) const;

  bool operator==(const Document&) const = default;

 private:
  std::string doc_id_;
  std::string title_;
  std::string abstract_;
  std::string text_;
  std::vector<Token> tokens_;
  std::vector<SentenceSpan> sentences_;
  int title_tokens_ = 0;
  int title_sentences_ = 0;
};

// ASCII-only lowercase; locale independent.
std::string to_lower_ascii(std::string_view s);

// Deterministic rule-based tokenizer with sentence splitting.
Tokenization tokenize(std::string_view text);

// Rule-based lemma. Identifiers (digits, or uppercase after the first
// character) pass through unchanged; everything else is lowercased and
// suffix-stripped. Idempotent.
std::string lemmatize(std::string_view token_text);

struct SkippedRecord {
  std::size_t line = 0;
  std::string reason;
};

struct CorpusLoad {
  std::vector<Document> documents;  // sorted by doc_id
  std::vector<SkippedRecord> skipped;
  std::vector<std::string> warnings;
};

// Reads a line-delimited JSON corpus with `doc_id`, `title`, `abstract`.
// Malformed records are skipped and reported; a duplicate doc_id throws
// FormatError naming both line numbers.
CorpusLoad ingest_corpus(const std::filesystem::path& path);
CorpusLoad ingest_corpus_stream(std::istream& in);

nlohmann::json to_json(const Document& doc);

}  // namespace celllit
