#include "celllit/eval.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "celllit/error.hpp"
#include "celllit/triples.hpp"

namespace celllit {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json metrics_json(const Metrics& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn},
          {"precision", m.precision()}, {"recall", m.recall()}, {"f1", m.f1()}};
}

std::optional<GoldSpan> parse_span(const nlohmann::json& a) {
  auto cat = parse_category(a.at("category").get<std::string>());
  if (!cat || (*cat != Category::Gene && *cat != Category::CellLine)) return std::nullopt;
  GoldSpan s;
  s.start = a.at("start").get<std::size_t>();
  s.end = a.at("end").get<std::size_t>();
  s.category = *cat;
  s.entity_id = a.at("entity_id").get<std::string>();
  return s;
}

// Returns an error message when a span does not fit the document.
std::string check_spans(const GoldAnnotation& g) {
  const std::size_t size = g.text().size();
  for (const auto& s : g.spans) {
    if (s.start >= s.end || s.end > size) {
      return "span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
             ") outside document of length " + std::to_string(size);
    }
  }
  return {};
}

}  // namespace

std::string GoldAnnotation::text() const {
  if (title.empty()) return abstract;
  if (abstract.empty()) return title;
  return title + " " + abstract;
}

std::set<std::pair<std::string, std::string>> GoldAnnotation::pairs() const {
  std::set<std::string> genes;
  std::set<std::string> cell_lines;
  for (const auto& s : spans) {
    if (!s.mapped) continue;
    (s.category == Category::Gene ? genes : cell_lines).insert(s.entity_id);
  }
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& g : genes) {
    for (const auto& c : cell_lines) out.emplace(g, c);
  }
  return out;
}

GoldLoad load_gold_stream(std::istream& in) {
  GoldLoad load;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    GoldAnnotation g;
    try {
      auto j = nlohmann::json::parse(line);
      g.doc_id = j.at("doc_id").get<std::string>();
      g.title = j.at("title").get<std::string>();
      g.abstract = j.at("abstract").get<std::string>();
      for (const auto& a : j.at("annotations")) {
        if (auto s = parse_span(a)) g.spans.push_back(std::move(*s));
      }
    } catch (const nlohmann::json::exception& e) {
      load.errors.push_back(where + e.what());
      continue;
    }
    if (std::string err = check_spans(g); !err.empty()) {
      load.errors.push_back(where + err);
      continue;
    }
    load.documents.push_back(std::move(g));
  }
  return load;
}

GoldLoad load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open gold file " + path.string());
  return load_gold_stream(in);
}

GoldLoad load_pubtator_stream(std::istream& in) {
  GoldLoad load;
  GoldAnnotation current;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    if (std::string err = check_spans(current); !err.empty()) {
      load.errors.push_back("document " + current.doc_id + ": " + err);
    } else {
      load.documents.push_back(std::move(current));
    }
    current = GoldAnnotation{};
    open = false;
  };
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    auto bar = line.find('|');
    if (bar != std::string::npos && bar + 2 < line.size() && line[bar + 2] == '|' &&
        line.find('\t') > bar) {
      std::string id = line.substr(0, bar);
      char kind = line[bar + 1];
      if (open && id != current.doc_id) flush();
      current.doc_id = id;
      open = true;
      (kind == 't' ? current.title : current.abstract) = line.substr(bar + 3);
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() < 6) continue;  // relation lines and other records
    GoldSpan s;
    if (fields[4] == "GeneOrGeneProduct") {
      s.category = Category::Gene;
      s.entity_id = "ncbigene:" + fields[5];
    } else if (fields[4] == "CellLine") {
      s.category = Category::CellLine;
      s.entity_id = "cellosaurus:" + fields[5];
    } else {
      continue;
    }
    try {
      s.start = std::stoul(fields[1]);
      s.end = std::stoul(fields[2]);
    } catch (const std::exception&) {
      load.errors.push_back("document " + fields[0] + ": bad offsets");
      continue;
    }
    current.spans.push_back(std::move(s));
  }
  flush();
  return load;
}

std::size_t map_gold_ids(std::vector<GoldAnnotation>& gold, const EntityDictionary& dict,
                         const std::map<std::string, std::string>& id_map) {
  std::size_t unmapped = 0;
  for (auto& g : gold) {
    for (auto& s : g.spans) {
      if (dict.find_entity(s.entity_id) != nullptr) continue;
      if (auto it = id_map.find(s.entity_id); it != id_map.end() && dict.find_entity(it->second)) {
        s.entity_id = it->second;
        continue;
      }
      s.mapped = false;
      ++unmapped;
    }
  }
  return unmapped;
}

double Metrics::precision() const { return ratio(tp, tp + fp); }
double Metrics::recall() const { return ratio(tp, tp + fn); }
double Metrics::f1() const {
  double p = precision();
  double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json ner_json = nlohmann::json::object();
  for (const auto& [cat, m] : ner) ner_json[cat] = metrics_json(m);
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : per_document) docs.push_back({{"doc_id", d.doc_id}, {"pairs", metrics_json(d.pairs)}});
  return {{"ner", std::move(ner_json)},
          {"pairs", metrics_json(pairs)},
          {"per_document", std::move(docs)},
          {"excluded_gold_entities", excluded_gold_entities},
          {"warnings", warnings}};
}

std::string EvalReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(14) << "task" << std::right << std::setw(6) << "TP" << std::setw(6)
     << "FP" << std::setw(6) << "FN" << std::setw(11) << "precision" << std::setw(9) << "recall"
     << std::setw(9) << "F1" << '\n';
  auto row = [&](const std::string& name, const Metrics& m) {
    os << std::left << std::setw(14) << name << std::right << std::setw(6) << m.tp << std::setw(6)
       << m.fp << std::setw(6) << m.fn << std::fixed << std::setprecision(4) << std::setw(11)
       << m.precision() << std::setw(9) << m.recall() << std::setw(9) << m.f1() << '\n';
  };
  for (const auto& [cat, m] : ner) row("NER " + cat, m);
  row("Gene-CellLine", pairs);
  if (excluded_gold_entities > 0) {
    os << "excluded gold entities (unmapped ids): " << excluded_gold_entities << '\n';
  }
  return os.str();
}

EvalReport evaluate_pairs(const std::set<PredictedPair>& predicted,
                          const std::vector<GoldAnnotation>& gold) {
  EvalReport report;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> gold_by_doc;
  for (const auto& g : gold) gold_by_doc[g.doc_id] = g.pairs();
  std::map<std::string, std::set<std::pair<std::string, std::string>>> pred_by_doc;
  for (const auto& [doc, gene, cell] : predicted) {
    if (!gold_by_doc.contains(doc)) {
      report.warnings.push_back("prediction for unknown document '" + doc + "' counted as FP");
    }
    pred_by_doc[doc].emplace(gene, cell);
  }
  std::set<std::string> doc_ids;
  for (const auto& [d, _] : gold_by_doc) doc_ids.insert(d);
  for (const auto& [d, _] : pred_by_doc) doc_ids.insert(d);
  for (const auto& d : doc_ids) {
    const auto& g = gold_by_doc[d];
    const auto& p = pred_by_doc[d];
    Metrics m;
    for (const auto& x : p) (g.contains(x) ? m.tp : m.fp)++;
    for (const auto& x : g) {
      if (!p.contains(x)) ++m.fn;
    }
    report.pairs.tp += m.tp;
    report.pairs.fp += m.fp;
    report.pairs.fn += m.fn;
    report.per_document.push_back({d, m});
  }
  return report;
}

EvalReport evaluate_ner(const std::set<NerSpan>& predicted, const std::vector<GoldAnnotation>& gold) {
  EvalReport report;
  std::set<NerSpan> gold_spans;
  std::set<std::string> gold_docs;
  for (const auto& g : gold) {
    gold_docs.insert(g.doc_id);
    for (const auto& s : g.spans) gold_spans.insert({g.doc_id, s.start, s.end, s.category});
  }
  for (Category c : {Category::Gene, Category::CellLine}) report.ner[std::string(to_string(c))] = {};
  for (const auto& p : predicted) {
    if (p.category != Category::Gene && p.category != Category::CellLine) continue;
    if (!gold_docs.contains(p.doc_id)) {
      report.warnings.push_back("prediction for unknown document '" + p.doc_id + "' counted as FP");
    }
    Metrics& m = report.ner[std::string(to_string(p.category))];
    (gold_spans.contains(p) ? m.tp : m.fp)++;
  }
  for (const auto& g : gold_spans) {
    if (!predicted.contains(g)) ++report.ner[std::string(to_string(g.category))].fn;
  }
  return report;
}

std::set<NerSpan> ner_spans(const Document& doc, std::span<const EntityMention> mentions) {
  std::set<NerSpan> out;
  for (const auto& m : mentions) {
    if (m.category != Category::Gene && m.category != Category::CellLine) continue;
    out.insert({doc.doc_id(), doc.tokens().at(m.token_span.start).char_start,
                doc.tokens().at(m.token_span.end - 1).char_end, m.category});
  }
  return out;
}

std::set<PredictedPair> gene_cell_line_pairs(std::span<const PairScore> scores,
                                             const EntityDictionary& dict) {
  std::set<PredictedPair> out;
  for (const auto& s : scores) {
    const OntologyEntity* a = dict.find_entity(s.entity_a);
    const OntologyEntity* b = dict.find_entity(s.entity_b);
    if (a == nullptr || b == nullptr || s.total <= 0.0) continue;
    if (a->category == Category::Gene && b->category == Category::CellLine) {
      out.emplace(s.doc_id, a->entity_id, b->entity_id);
    } else if (a->category == Category::CellLine && b->category == Category::Gene) {
      out.emplace(s.doc_id, b->entity_id, a->entity_id);
    }
  }
  return out;
}

EvalReport evaluate_pipeline(const std::vector<GoldAnnotation>& gold, const EntityDictionary& dict,
                             std::size_t excluded_gold_entities) {
  std::set<NerSpan> predicted_spans;
  std::set<PredictedPair> predicted_pairs;
  for (const auto& g : gold) {
    Document doc(g.doc_id, g.title, g.abstract);
    auto mentions = match_document(doc, dict);
    auto triples = extract_triples(doc, dict).triples;
    auto scores = score_document(doc, mentions, triples);
    predicted_spans.merge(ner_spans(doc, mentions));
    predicted_pairs.merge(gene_cell_line_pairs(scores, dict));
  }
  EvalReport report = evaluate_pairs(predicted_pairs, gold);
  EvalReport ner = evaluate_ner(predicted_spans, gold);
  report.ner = std::move(ner.ner);
  report.warnings.insert(report.warnings.end(), ner.warnings.begin(), ner.warnings.end());
  report.excluded_gold_entities = excluded_gold_entities;
  return report;
}

}  // namespace celllit
