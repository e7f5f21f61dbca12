#include "mogc/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace mogc {

SparseSymMatrix Graph::adjacency() const {
  std::vector<Triplet> ts;
  ts.reserve(edges.size());
  for (const auto& e : edges) ts.push_back({e.u, e.v, e.w});
  return SparseSymMatrix::from_triplets(n, std::move(ts));
}

SparseSymMatrix Graph::adjacency_binary() const {
  std::vector<Triplet> ts;
  ts.reserve(edges.size());
  for (const auto& e : edges) ts.push_back({e.u, e.v, 1.0});
  return SparseSymMatrix::from_triplets(n, std::move(ts));
}

namespace {

int intern_node(Graph& g, std::int64_t id) {
  auto it = g.id_of.find(id);
  if (it != g.id_of.end()) return it->second;
  int dense = g.n++;
  g.id_of.emplace(id, dense);
  g.original_ids.push_back(id);
  return dense;
}

void finish_edges(Graph& g, std::map<std::pair<int, int>, double>& acc, bool sum_weights) {
  g.edges.reserve(acc.size());
  for (const auto& [uv, w] : acc) g.edges.push_back({uv.first, uv.second, w});
  (void)sum_weights;
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path.string());
  Graph g;
  std::map<std::pair<int, int>, double> acc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::int64_t a, b;
    if (!(ss >> a)) continue;  // blank or comment-only line
    double w = 1.0;
    if (!(ss >> b))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected two node ids");
    if (ss >> w) {
      if (w < 0.0)
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative weight");
    }
    std::string rest;
    if (ss >> rest)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": trailing tokens");
    ++g.raw_edge_records;
    int u = intern_node(g, a);
    int v = intern_node(g, b);
    if (u == v) {
      ++g.self_loops_dropped;
      continue;
    }
    if (u > v) std::swap(u, v);
    auto [it, fresh] = acc.emplace(std::make_pair(u, v), w);
    if (!fresh) {
      it->second += w;
      ++g.duplicates_collapsed;
    }
  }
  finish_edges(g, acc, true);
  return g;
}

LabelVector load_labels(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path.string());
  LabelVector out;
  out.labels.assign(g.n, -1);
  std::unordered_map<std::string, int> dense;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::int64_t id;
    std::string tok;
    if (!(ss >> id)) continue;
    if (!(ss >> tok))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected a label");
    auto it = g.id_of.find(id);
    if (it == g.id_of.end())
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": unknown node id " +
                       std::to_string(id));
    auto [lit, fresh] = dense.emplace(tok, out.k);
    if (fresh) {
      ++out.k;
      out.names.push_back(tok);
    }
    out.labels[it->second] = lit->second;
  }
  return out;
}

// ---------------------------------------------------------------------------
// GML

namespace {

struct GmlToken {
  enum Kind { Word, Number, String, LBracket, RBracket } kind;
  std::string text;   // Word / String
  double number = 0;  // Number
  std::size_t line = 0;
};

std::vector<GmlToken> gml_tokenize(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path.string());
  std::string src((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<GmlToken> toks;
  std::size_t line = 1;
  for (std::size_t i = 0; i < src.size();) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '[') {
      toks.push_back({GmlToken::LBracket, "", 0, line});
      ++i;
    } else if (c == ']') {
      toks.push_back({GmlToken::RBracket, "", 0, line});
      ++i;
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string s;
      while (j < src.size() && src[j] != '"') {
        if (src[j] == '\n') ++line;
        s += src[j++];
      }
      if (j == src.size())
        throw ParseError(path.string() + ":" + std::to_string(line) + ": unterminated string");
      toks.push_back({GmlToken::String, s, 0, line});
      i = j + 1;
    } else if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && !std::isspace(static_cast<unsigned char>(src[j])) &&
             src[j] != '[' && src[j] != ']')
        ++j;
      std::string s = src.substr(i, j - i);
      try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        toks.push_back({GmlToken::Number, s, v, line});
      } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
      }
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      toks.push_back({GmlToken::Word, src.substr(i, j - i), 0, line});
      i = j;
    } else {
      throw ParseError(path.string() + ":" + std::to_string(line) + ": unexpected character '" +
                       std::string(1, c) + "'");
    }
  }
  return toks;
}

// A parsed key/value pair; blocks hold nested pairs.
struct GmlValue {
  enum Kind { Number, String, Block } kind = Number;
  double number = 0;
  std::string text;
  std::vector<std::pair<std::string, GmlValue>> block;
};

std::vector<std::pair<std::string, GmlValue>> gml_parse_pairs(const std::filesystem::path& path,
                                                              const std::vector<GmlToken>& toks,
                                                              std::size_t& i, bool top);

GmlValue gml_parse_value(const std::filesystem::path& path, const std::vector<GmlToken>& toks,
                         std::size_t& i) {
  if (i >= toks.size()) throw ParseError(path.string() + ": unexpected end of file");
  const GmlToken& t = toks[i];
  GmlValue v;
  switch (t.kind) {
    case GmlToken::Number:
      v.kind = GmlValue::Number;
      v.number = t.number;
      v.text = t.text;
      ++i;
      return v;
    case GmlToken::String:
    case GmlToken::Word:  // bare-word values show up in sloppy files
      v.kind = GmlValue::String;
      v.text = t.text;
      ++i;
      return v;
    case GmlToken::LBracket: {
      ++i;
      v.kind = GmlValue::Block;
      v.block = gml_parse_pairs(path, toks, i, false);
      if (i >= toks.size() || toks[i].kind != GmlToken::RBracket)
        throw ParseError(path.string() + ":" + std::to_string(t.line) + ": unterminated block");
      ++i;
      return v;
    }
    default:
      throw ParseError(path.string() + ":" + std::to_string(t.line) + ": unexpected ']'");
  }
}

std::vector<std::pair<std::string, GmlValue>> gml_parse_pairs(const std::filesystem::path& path,
                                                              const std::vector<GmlToken>& toks,
                                                              std::size_t& i, bool top) {
  std::vector<std::pair<std::string, GmlValue>> pairs;
  while (i < toks.size() && toks[i].kind != GmlToken::RBracket) {
    if (toks[i].kind != GmlToken::Word)
      throw ParseError(path.string() + ":" + std::to_string(toks[i].line) + ": expected a key");
    std::string key = toks[i].text;
    ++i;
    pairs.emplace_back(std::move(key), gml_parse_value(path, toks, i));
  }
  if (!top && i >= toks.size())
    throw ParseError(path.string() + ": unexpected end of file inside a block");
  return pairs;
}

const GmlValue* find_key(const std::vector<std::pair<std::string, GmlValue>>& pairs,
                         const std::string& key) {
  for (const auto& [k, v] : pairs)
    if (k == key) return &v;
  return nullptr;
}

}  // namespace

GmlData load_gml(const std::filesystem::path& path, const std::string& label_key) {
  auto toks = gml_tokenize(path);
  std::size_t i = 0;
  auto doc = gml_parse_pairs(path, toks, i, true);
  const GmlValue* gv = find_key(doc, "graph");
  if (!gv || gv->kind != GmlValue::Block)
    throw ParseError(path.string() + ": no graph block");

  GmlData out;
  Graph& g = out.graph;
  std::vector<std::string> raw_labels;  // aligned with dense node ids, "" = none
  std::map<std::pair<int, int>, double> acc;
  for (const auto& [key, val] : gv->block) {
    if (key == "node" && val.kind == GmlValue::Block) {
      const GmlValue* idv = find_key(val.block, "id");
      if (!idv || idv->kind != GmlValue::Number)
        throw ParseError(path.string() + ": node without integer id");
      std::int64_t id = static_cast<std::int64_t>(idv->number);
      if (g.id_of.count(id)) throw ParseError(path.string() + ": duplicate node id");
      intern_node(g, id);
      const GmlValue* lv = find_key(val.block, label_key);
      raw_labels.push_back(lv ? lv->text : "");
    } else if (key == "edge" && val.kind == GmlValue::Block) {
      const GmlValue* sv = find_key(val.block, "source");
      const GmlValue* tv = find_key(val.block, "target");
      if (!sv || !tv || sv->kind != GmlValue::Number || tv->kind != GmlValue::Number)
        throw ParseError(path.string() + ": edge without source/target");
      auto su = g.id_of.find(static_cast<std::int64_t>(sv->number));
      auto tu = g.id_of.find(static_cast<std::int64_t>(tv->number));
      if (su == g.id_of.end() || tu == g.id_of.end())
        throw ParseError(path.string() + ": edge references undeclared node");
      double w = 1.0;
      if (const GmlValue* wv = find_key(val.block, "weight"); wv && wv->kind == GmlValue::Number)
        w = wv->number;
      else if (const GmlValue* vv = find_key(val.block, "value"); vv && vv->kind == GmlValue::Number)
        w = vv->number;
      if (w < 0.0) throw ParseError(path.string() + ": negative edge weight");
      ++g.raw_edge_records;
      int u = su->second, v = tu->second;
      if (u == v) {
        ++g.self_loops_dropped;
        continue;
      }
      if (u > v) std::swap(u, v);
      // Symmetrized presence: repeated records and reverse arcs collapse to
      // one undirected edge carrying the maximum recorded weight.
      auto [it, fresh] = acc.emplace(std::make_pair(u, v), w);
      if (!fresh) {
        it->second = std::max(it->second, w);
        ++g.duplicates_collapsed;
      }
    }
  }
  finish_edges(g, acc, false);

  bool any = false;
  for (const auto& s : raw_labels)
    if (!s.empty()) any = true;
  if (any) {
    out.labels.labels.assign(g.n, -1);
    std::unordered_map<std::string, int> dense;
    for (int v = 0; v < g.n; ++v) {
      if (raw_labels[v].empty()) continue;
      auto [lit, fresh] = dense.emplace(raw_labels[v], out.labels.k);
      if (fresh) {
        ++out.labels.k;
        out.labels.names.push_back(raw_labels[v]);
      }
      out.labels.labels[v] = lit->second;
    }
  }
  return out;
}

}  // namespace mogc
