#include "celllit/triples.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "celllit/error.hpp"
#include "celllit/matcher.hpp"
#include "celllit/tagger.hpp"

namespace celllit {
namespace {

struct VerbGroup {
  int start = 0;  // sentence-local
  int end = 0;
  int head = 0;
};

bool nominal(Tag t) { return t == Tag::Noun || t == Tag::Adj || t == Tag::Num || t == Tag::Det; }
bool contentful(Tag t) { return t == Tag::Noun || t == Tag::Num; }

// Verb groups: (Adv)* (Aux|Adv|Verb)+ (Particle)*, containing a Verb or Aux.
std::vector<VerbGroup> find_verb_groups(const std::vector<Tag>& tags) {
  std::vector<VerbGroup> groups;
  const int n = static_cast<int>(tags.size());
  int i = 0;
  while (i < n) {
    if (tags[i] != Tag::Verb && tags[i] != Tag::Aux) {
      ++i;
      continue;
    }
    int start = i;
    while (start > 0 && tags[start - 1] == Tag::Adv &&
           (groups.empty() || start - 1 >= groups.back().end)) {
      --start;
    }
    int end = i;
    int head = -1;
    int last_aux = -1;
    while (end < n && (tags[end] == Tag::Verb || tags[end] == Tag::Aux || tags[end] == Tag::Adv)) {
      if (tags[end] == Tag::Verb) head = end;
      if (tags[end] == Tag::Aux) last_aux = end;
      ++end;
    }
    while (end < n && tags[end] == Tag::Particle) ++end;
    // Trailing adverbs stay with the group only when a verb follows them.
    int trimmed = end;
    while (trimmed > i && tags[trimmed - 1] == Tag::Adv) --trimmed;
    if (head < 0) head = last_aux;
    groups.push_back({start, trimmed, head});
    i = end;
  }
  return groups;
}

// Index of the "(" matching the ")" at `close`, or -1.
int match_open(std::span<const Token> toks, int close, int lower) {
  int depth = 0;
  for (int k = close; k >= lower; --k) {
    if (toks[k].text_raw == ")") ++depth;
    if (toks[k].text_raw == "(") {
      if (--depth == 0) return k;
    }
  }
  return -1;
}

int match_close(std::span<const Token> toks, int open, int upper) {
  int depth = 0;
  for (int k = open; k < upper; ++k) {
    if (toks[k].text_raw == "(") ++depth;
    if (toks[k].text_raw == ")") {
      if (--depth == 0) return k;
    }
  }
  return -1;
}

// Maximal noun phrase ending at `last` (inclusive) and not before `lower`.
// Returns the start, or last + 1 when there is none.
int subject_start(std::span<const Token> toks, const std::vector<Tag>& tags, int last, int lower) {
  int k = last;
  bool has_content = false;
  while (k >= lower) {
    if (toks[k].text_raw == ")") {
      int open = match_open(toks, k, lower);
      if (open < 0) break;
      k = open - 1;
      continue;
    }
    if (tags[k] == Tag::Det) {
      --k;
      break;
    }
    if (tags[k] == Tag::Prep && toks[k].text_cased == "of" && has_content && k > lower &&
        nominal(tags[k - 1])) {
      --k;
      continue;
    }
    if (!nominal(tags[k])) break;
    if (contentful(tags[k])) has_content = true;
    --k;
  }
  int start = k + 1;
  for (int j = start; j <= last; ++j) {
    if (contentful(tags[j])) return start;
  }
  return last + 1;
}

// Object extent within [begin, limit). Returns the exclusive end.
int object_end(std::span<const Token> toks, const std::vector<Tag>& tags, int begin, int limit) {
  int k = begin;
  while (k < limit) {
    const Tag t = tags[k];
    if (toks[k].text_raw == "(") {
      int close = match_close(toks, k, limit);
      if (close < 0) break;
      k = close + 1;
      continue;
    }
    if (nominal(t) || t == Tag::Prep) {
      ++k;
      continue;
    }
    if ((toks[k].text_raw == "," || t == Tag::Conj) && k + 1 < limit && nominal(tags[k + 1])) {
      ++k;
      continue;
    }
    break;
  }
  while (k > begin) {
    const Tag t = tags[k - 1];
    if (t == Tag::Prep || t == Tag::Det || t == Tag::Conj || t == Tag::Punct) {
      if (toks[k - 1].text_raw == ")") break;
      --k;
      continue;
    }
    break;
  }
  return k;
}

// End of the leading noun phrase of an object (before any preposition).
int core_end(std::span<const Token> toks, const std::vector<Tag>& tags, int begin, int end) {
  int k = begin;
  while (k < end) {
    if (toks[k].text_raw == "(") {
      int close = match_close(toks, k, end);
      if (close < 0) break;
      k = close + 1;
      continue;
    }
    if (!nominal(tags[k])) break;
    ++k;
  }
  return k;
}

std::string noun_head(std::span<const Token> toks, const std::vector<Tag>& tags, int begin, int end) {
  int core = core_end(toks, tags, begin, end);
  // A single identifier in parentheses names the phrase, as in "cell line (NCI-H209)".
  for (int k = begin; k + 2 < core; ++k) {
    if (toks[k].text_raw == "(" && toks[k + 2].text_raw == ")" && contentful(tags[k + 1])) {
      return toks[k + 1].text_raw;
    }
  }
  for (int k = core - 1; k >= begin; --k) {
    if (!contentful(tags[k])) continue;
    // Numbered names such as "Detroit 562" keep their stem.
    if (tags[k] == Tag::Num && k > begin && tags[k - 1] == Tag::Noun) {
      return toks[k - 1].text_raw + " " + toks[k].text_raw;
    }
    return toks[k].text_raw;
  }
  for (int k = end - 1; k >= begin; --k) {
    if (contentful(tags[k])) return toks[k].text_raw;
  }
  return toks[end - 1].text_raw;
}

std::string upper_ascii(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

Phrase make_phrase(const Document& doc, int offset, int begin, int end, std::string head,
                   std::string head_lemma) {
  Phrase p;
  p.token_span = {offset + begin, offset + end};
  p.context = std::string(doc.span_text(p.token_span));
  p.head = std::move(head);
  p.head_lemma = std::move(head_lemma);
  return p;
}

std::vector<std::string> linked_ids(const Document& doc, TokenSpan span, const EntityDictionary& dict) {
  std::span<const Token> toks(doc.tokens());
  std::set<std::string> ids;
  for (const auto& m : match_span(toks.subspan(span.start, span.length()), dict)) {
    ids.insert(m.entity_id);
  }
  return {ids.begin(), ids.end()};
}

nlohmann::json phrase_json(const Phrase& p) {
  return {{"head", p.head},
          {"head_lemma", p.head_lemma},
          {"context", p.context},
          {"span", {p.token_span.start, p.token_span.end}}};
}

Phrase phrase_from_json(const nlohmann::json& j) {
  Phrase p;
  p.head = j.at("head").get<std::string>();
  p.head_lemma = j.at("head_lemma").get<std::string>();
  p.context = j.at("context").get<std::string>();
  p.token_span = {j.at("span").at(0).get<int>(), j.at("span").at(1).get<int>()};
  return p;
}

}  // namespace

std::string Triple::display() const {
  return "(" + subject.head + " [" + subject.context + "] ; " + predicate.head + " [" +
         predicate.context + "] ; " + object.head + " [" + object.context + "])";
}

std::vector<Triple> extract_sentence_triples(const Document& doc, int sentence_index) {
  const SentenceSpan sentence = doc.sentences().at(sentence_index);
  std::span<const Token> toks = std::span<const Token>(doc.tokens()).subspan(
      sentence.start, sentence.length());
  const int n = static_cast<int>(toks.size());
  std::vector<Tag> tags = tag_sentence(toks);
  std::vector<VerbGroup> groups = find_verb_groups(tags);
  const int g = static_cast<int>(groups.size());

  // Subject start per group; -1 when the group has none of its own.
  std::vector<int> own_subject(g, -1);
  for (int k = 0; k < g; ++k) {
    int lower = k == 0 ? 0 : groups[k - 1].end;
    int last = groups[k].start - 1;
    if (last < lower) continue;
    int s = subject_start(toks, tags, last, lower);
    if (s <= last) own_subject[k] = s;
  }

  std::vector<Triple> out;
  std::pair<int, int> previous_subject{-1, -1};
  for (int k = 0; k < g; ++k) {
    const VerbGroup& vg = groups[k];
    std::pair<int, int> subject{-1, -1};
    if (own_subject[k] >= 0) {
      subject = {own_subject[k], vg.start};
    } else if (k > 0 && previous_subject.first >= 0) {
      int before = vg.start - 1;
      if (before >= 0 && tags[before] == Tag::Conj) subject = previous_subject;
    }
    previous_subject = subject;
    if (subject.first < 0) continue;

    int limit = n;
    if (k + 1 < g) limit = own_subject[k + 1] >= 0 ? own_subject[k + 1] : groups[k + 1].start;

    int pred_end = vg.end;
    while (pred_end < limit && tags[pred_end] == Tag::Prep) ++pred_end;
    int obj_begin = pred_end;
    int obj_end = object_end(toks, tags, obj_begin, limit);
    if (obj_end <= obj_begin) continue;

    // "expresses an aberrant form of X": the leading noun phrase joins the
    // predicate and the object starts after "of".
    int core = core_end(toks, tags, obj_begin, obj_end);
    if (core > obj_begin && core + 1 < obj_end && toks[core].text_cased == "of") {
      int rest = core + 1;
      bool has_content = false;
      for (int j = rest; j < obj_end; ++j) has_content = has_content || contentful(tags[j]);
      if (has_content) {
        pred_end = core;
        obj_begin = rest;
      }
    }
    bool object_content = false;
    for (int j = obj_begin; j < obj_end; ++j) object_content = object_content || contentful(tags[j]);
    if (!object_content) continue;

    const Token& verb = toks[vg.head];
    Triple t;
    t.doc_id = doc.doc_id();
    t.sentence_index = sentence_index;
    t.subject = make_phrase(doc, sentence.start, subject.first, subject.second,
                            noun_head(toks, tags, subject.first, subject.second), "");
    t.subject.head_lemma = lemmatize(t.subject.head);
    t.predicate = make_phrase(doc, sentence.start, vg.start, pred_end,
                              upper_ascii(verb.text_raw), verb.text_lemma);
    t.object = make_phrase(doc, sentence.start, obj_begin, obj_end,
                           noun_head(toks, tags, obj_begin, obj_end), "");
    t.object.head_lemma = lemmatize(t.object.head);
    out.push_back(std::move(t));
  }
  return out;
}

Triple link_triple_entities(Triple t, const Document& doc, const EntityDictionary& dict) {
  t.subject_entities = linked_ids(doc, t.subject.token_span, dict);
  t.object_entities = linked_ids(doc, t.object.token_span, dict);
  return t;
}

TripleExtraction extract_triples(const Document& doc, const EntityDictionary& dict) {
  TripleExtraction result;
  for (int s = 0; s < static_cast<int>(doc.sentences().size()); ++s) {
    if (doc.sentences()[s].length() > kMaxSentenceTokens) {
      ++result.skipped_long_sentences;
      continue;
    }
    for (auto& t : extract_sentence_triples(doc, s)) {
      result.triples.push_back(link_triple_entities(std::move(t), doc, dict));
    }
  }
  return result;
}

nlohmann::json to_json(const Triple& t) {
  return {{"doc_id", t.doc_id},
          {"sentence_index", t.sentence_index},
          {"subject", phrase_json(t.subject)},
          {"predicate", phrase_json(t.predicate)},
          {"object", phrase_json(t.object)},
          {"subject_entities", t.subject_entities},
          {"object_entities", t.object_entities},
          {"linked", t.linked()},
          {"display", t.display()}};
}

Triple triple_from_json(const nlohmann::json& j) {
  Triple t;
  t.doc_id = j.at("doc_id").get<std::string>();
  t.sentence_index = j.at("sentence_index").get<int>();
  t.subject = phrase_from_json(j.at("subject"));
  t.predicate = phrase_from_json(j.at("predicate"));
  t.object = phrase_from_json(j.at("object"));
  t.subject_entities = j.at("subject_entities").get<std::vector<std::string>>();
  t.object_entities = j.at("object_entities").get<std::vector<std::string>>();
  return t;
}

}  // namespace celllit
