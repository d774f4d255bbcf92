#include "klein/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace klein::io {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Line/column of a byte offset, for pointing at JSON syntax errors.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_document(const std::string& path, const std::string& kind) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": top level must be an object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != 1)
    throw ParseError(path + ": field 'format_version': expected the integer 1");
  if (!j.contains("kind") || j["kind"] != kind)
    throw ParseError(path + ": field 'kind': expected \"" + kind + "\"");
  return j;
}

[[noreturn]] void field_error(const std::string& path, const std::string& field,
                              const std::string& what) {
  throw ParseError(path + ": field '" + field + "': " + what);
}

// `where` is the dotted display path of the field; the JSON key looked up is
// its last component.
const json& field(const json& j, const std::string& path, const std::string& where) {
  auto dot = where.rfind('.');
  std::string key = dot == std::string::npos ? where : where.substr(dot + 1);
  if (!j.is_object() || !j.contains(key)) field_error(path, where, "missing");
  return j[key];
}

Rational rational_field(const json& j, const std::string& path, const std::string& field_name) {
  if (!j.is_string()) field_error(path, field_name, "rationals must be strings \"p/q\"");
  try {
    return rational_from_string(j.get<std::string>());
  } catch (const std::exception& e) {
    field_error(path, field_name, e.what());
  }
}

std::size_t index_field(const json& j, const std::string& path, const std::string& field_name,
                        std::size_t bound) {
  if (!j.is_number_unsigned()) field_error(path, field_name, "expected a non-negative integer");
  auto v = j.get<std::size_t>();
  if (v >= bound)
    field_error(path, field_name,
                "index " + std::to_string(v) + " out of range (< " + std::to_string(bound) + ")");
  return v;
}

SparseVector parse_vector(const json& j, const std::string& path, const std::string& field_name,
                          std::size_t dim) {
  if (!j.is_object()) field_error(path, field_name, "expected an object {\"index\": \"p/q\"}");
  SparseVector v;
  for (const auto& [key, val] : j.items()) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(key);
    } catch (const std::exception&) {
      field_error(path, field_name, "key '" + key + "' is not an index");
    }
    if (idx >= dim)
      field_error(path, field_name, "index " + key + " out of range (< " + std::to_string(dim) + ")");
    Rational r = rational_field(val, path, field_name + "." + key);
    if (r != 0) v[idx] = r;
  }
  return v;
}

SparseMatrix parse_matrix(const json& j, const std::string& path, const std::string& field_name,
                          std::size_t rows, std::size_t cols) {
  if (!j.is_array()) field_error(path, field_name, "expected a triplet list [[r,c,\"p/q\"],...]");
  SparseMatrix m(rows, cols);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3)
      field_error(path, field_name, "each entry must be [row, col, \"p/q\"]");
    std::size_t r = index_field(t[0], path, field_name + ".row", rows);
    std::size_t c = index_field(t[1], path, field_name + ".col", cols);
    m.set(r, c, rational_field(t[2], path, field_name + ".value"));
  }
  return m;
}

json vector_to_json(const SparseVector& v) {
  json j = json::object();
  for (const auto& [i, r] : v) j[std::to_string(i)] = rational_to_string(r);
  return j;
}

json matrix_to_json(const SparseMatrix& m) {
  json j = json::array();
  for (const auto& [rc, v] : m.entries())
    j.push_back(json::array({rc.first, rc.second, rational_to_string(v)}));
  return j;
}

}  // namespace

ExampleCategory load_category(const std::string& path) {
  json j = parse_document(path, "category");
  ExampleCategory ex;
  ex.name = j.value("name", path);

  const json& branes = field(j, path, "branes");
  if (!branes.is_array() || branes.empty()) field_error(path, "branes", "expected a nonempty array");
  for (const auto& b : branes) {
    if (!b.is_string()) field_error(path, "branes", "brane names must be strings");
    ex.cat.branes.push_back(b.get<std::string>());
  }
  const std::size_t nb = ex.cat.branes.size();

  const json& homs = field(j, path, "homs");
  if (!homs.is_array() || homs.size() != nb)
    field_error(path, "homs", "expected one row of hom bases per brane");
  ex.cat.homs.resize(nb);
  for (std::size_t a = 0; a < nb; ++a) {
    if (!homs[a].is_array() || homs[a].size() != nb)
      field_error(path, "homs", "row " + std::to_string(a) + " must have one entry per brane");
    ex.cat.homs[a].resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const json& h = homs[a][b];
      std::string where = "homs[" + std::to_string(a) + "][" + std::to_string(b) + "]";
      const json& names = field(h, path, where + ".names");
      const json& degrees = field(h, path, where + ".degrees");
      if (!names.is_array() || !degrees.is_array() || names.size() != degrees.size())
        field_error(path, where, "names and degrees must be arrays of equal length");
      for (const auto& n : names) ex.cat.homs[a][b].names.push_back(n.get<std::string>());
      for (const auto& d : degrees) {
        if (!d.is_number_integer()) field_error(path, where + ".degrees", "expected integers");
        ex.cat.homs[a][b].degrees.push_back(d.get<int>());
      }
    }
  }

  const json& compose = field(j, path, "compose");
  if (!compose.is_array()) field_error(path, "compose", "expected an array of blocks");
  for (const auto& blk : compose) {
    const json& objs = field(blk, path, "compose.objects");
    if (!objs.is_array() || objs.size() != 3) field_error(path, "compose.objects", "expected [a,b,c]");
    std::size_t a = index_field(objs[0], path, "compose.objects", nb);
    std::size_t b = index_field(objs[1], path, "compose.objects", nb);
    std::size_t c = index_field(objs[2], path, "compose.objects", nb);
    const json& table = field(blk, path, "compose.table");
    std::size_t da = ex.cat.dim(a, b), db = ex.cat.dim(b, c), dc = ex.cat.dim(a, c);
    if (!table.is_array() || table.size() != da)
      field_error(path, "compose.table", "expected one row per basis element of the first factor");
    std::vector<std::vector<SparseVector>> rows(da, std::vector<SparseVector>(db));
    for (std::size_t i = 0; i < da; ++i) {
      if (!table[i].is_array() || table[i].size() != db)
        field_error(path, "compose.table", "row " + std::to_string(i) + " has wrong length");
      for (std::size_t k = 0; k < db; ++k)
        rows[i][k] = parse_vector(table[i][k], path, "compose.table", dc);
    }
    ex.cat.compose_table[{a, b, c}] = std::move(rows);
  }

  const json& units = field(j, path, "units");
  if (!units.is_array() || units.size() != nb) field_error(path, "units", "expected one per brane");
  for (std::size_t a = 0; a < nb; ++a)
    ex.cat.units.push_back(parse_vector(units[a], path, "units[" + std::to_string(a) + "]",
                                        ex.cat.dim(a, a)));

  for (const std::string key : {"diff", "star"}) {
    if (!j.contains(key)) continue;
    const json& arr = j[key];
    if (!arr.is_array()) field_error(path, key, "expected an array of blocks");
    for (const auto& blk : arr) {
      const json& objs = field(blk, path, key + ".objects");
      if (!objs.is_array() || objs.size() != 2) field_error(path, key + ".objects", "expected [a,b]");
      std::size_t a = index_field(objs[0], path, key + ".objects", nb);
      std::size_t b = index_field(objs[1], path, key + ".objects", nb);
      std::size_t rows = key == "diff" ? ex.cat.dim(a, b) : ex.cat.dim(b, a);
      SparseMatrix m = parse_matrix(field(blk, path, key + ".matrix"), path, key + ".matrix", rows,
                                    ex.cat.dim(a, b));
      if (key == "diff")
        ex.cat.diff[{a, b}] = std::move(m);
      else
        ex.cat.star[{a, b}] = std::move(m);
    }
  }

  if (j.contains("trace")) {
    const json& tr = j["trace"];
    CalabiYauData cy;
    const json& deg = field(tr, path, "trace.degree");
    if (!deg.is_number_integer()) field_error(path, "trace.degree", "expected an integer");
    cy.degree = deg.get<int>();
    const json& rows = field(tr, path, "trace.rows");
    if (!rows.is_array() || rows.size() != nb) field_error(path, "trace.rows", "one per brane");
    for (std::size_t a = 0; a < nb; ++a)
      cy.trace.push_back(parse_vector(rows[a], path, "trace.rows[" + std::to_string(a) + "]",
                                      ex.cat.dim(a, a)));
    ex.cy = std::move(cy);
  }
  return ex;
}

std::string category_to_json(const ExampleCategory& ex) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "category";
  j["name"] = ex.name;
  j["branes"] = ex.cat.branes;
  json homs = json::array();
  for (const auto& row : ex.cat.homs) {
    json r = json::array();
    for (const auto& h : row) r.push_back({{"names", h.names}, {"degrees", h.degrees}});
    homs.push_back(r);
  }
  j["homs"] = homs;
  json compose = json::array();
  for (const auto& [key, rows] : ex.cat.compose_table) {
    json table = json::array();
    for (const auto& row : rows) {
      json tr = json::array();
      for (const auto& v : row) tr.push_back(vector_to_json(v));
      table.push_back(tr);
    }
    compose.push_back({{"objects", {std::get<0>(key), std::get<1>(key), std::get<2>(key)}},
                       {"table", table}});
  }
  j["compose"] = compose;
  json units = json::array();
  for (const auto& u : ex.cat.units) units.push_back(vector_to_json(u));
  j["units"] = units;
  for (const auto& [name, blocks] :
       {std::pair{"diff", &ex.cat.diff}, std::pair{"star", &ex.cat.star}}) {
    json arr = json::array();
    for (const auto& [ab, m] : *blocks) {
      if (m.is_zero()) continue;
      arr.push_back({{"objects", {ab.first, ab.second}}, {"matrix", matrix_to_json(m)}});
    }
    j[name] = arr;
  }
  if (ex.cy) {
    json rows = json::array();
    for (const auto& t : ex.cy->trace) rows.push_back(vector_to_json(t));
    j["trace"] = {{"degree", ex.cy->degree}, {"rows", rows}};
  }
  return j.dump(2) + "\n";
}

MobiusGraph load_graph(const std::string& path) {
  json j = parse_document(path, "graph");
  MobiusGraph g;
  auto size_list = [&](const std::string& key) {
    const json& arr = field(j, path, key);
    if (!arr.is_array()) field_error(path, key, "expected an array");
    return arr;
  };
  const json& iota = size_list("iota");
  std::size_t H = iota.size();
  for (const auto& v : iota) g.iota.push_back(index_field(v, path, "iota", H));
  const json& vertex = size_list("vertex");
  if (vertex.size() != H) field_error(path, "vertex", "must have one entry per half-edge");
  const json& cyclic = size_list("cyclic");
  std::size_t V = cyclic.size();
  for (const auto& v : vertex) g.vertex.push_back(index_field(v, path, "vertex", V));
  for (const auto& cyc : cyclic) {
    if (!cyc.is_array()) field_error(path, "cyclic", "each vertex needs an array of half-edges");
    std::vector<std::size_t> order;
    for (const auto& h : cyc) order.push_back(index_field(h, path, "cyclic", H));
    g.cyclic.push_back(std::move(order));
  }
  const json& colour = size_list("colour");
  if (colour.size() != H) field_error(path, "colour", "must have one entry per half-edge");
  for (const auto& c : colour) {
    if (!c.is_number_integer() || (c.get<int>() != 0 && c.get<int>() != 1))
      field_error(path, "colour", "colours are 0 or 1");
    g.colour.push_back(c.get<int>());
  }
  const json& legs = size_list("leg_labels");
  if (legs.size() != V) field_error(path, "leg_labels", "must have one entry per vertex");
  for (const auto& l : legs) {
    if (!l.is_number_integer() || l.get<int>() < 0)
      field_error(path, "leg_labels", "labels are non-negative integers (0 = not a leg)");
    g.leg_label.push_back(l.get<int>());
  }
  if (auto bad = validate(g)) field_error(path, "graph", *bad);
  return g;
}

std::string graph_to_json(const MobiusGraph& g) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "graph";
  j["iota"] = g.iota;
  j["vertex"] = g.vertex;
  j["cyclic"] = g.cyclic;
  j["colour"] = g.colour;
  j["leg_labels"] = g.leg_label;
  return j.dump(2) + "\n";
}

namespace {

const char* kind_name(Generator::Kind k) {
  switch (k) {
    case Generator::Kind::DiscAllIn: return "disc_all_in";
    case Generator::Kind::DiscPlus: return "disc_plus";
    case Generator::Kind::TwistedDisc: return "twisted_disc";
    case Generator::Kind::DiscIn2: return "disc_in2";
    case Generator::Kind::DiscOut2: return "disc_out2";
    case Generator::Kind::Annulus: return "annulus";
    case Generator::Kind::Identity: return "identity";
    case Generator::Kind::Permute: return "permute";
  }
  return "?";
}

ObjectLabel parse_object(const json& j, const std::string& path, const std::string& where) {
  ObjectLabel obj;
  const json& pts = field(j, path, where + ".points");
  if (!pts.is_array()) field_error(path, where + ".points", "expected an array of [s,t] pairs");
  for (const auto& p : pts) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
      field_error(path, where + ".points", "each open point is a pair of brane labels [s,t]");
    obj.open.push_back({p[0].get<std::size_t>(), p[1].get<std::size_t>()});
  }
  if (j.contains("closed")) {
    if (!j["closed"].is_number_unsigned()) field_error(path, where + ".closed", "expected a count");
    obj.closed = j["closed"].get<std::size_t>();
  }
  return obj;
}

Tree parse_tree(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "tree", "expected an object");
  if (j.contains("compose") || j.contains("tensor")) {
    const bool comp = j.contains("compose");
    const json& kids = j[comp ? "compose" : "tensor"];
    if (!kids.is_array() || kids.empty())
      field_error(path, comp ? "compose" : "tensor", "expected a nonempty array of subtrees");
    Tree t;
    t.kind = comp ? Tree::Kind::Compose : Tree::Kind::Tensor;
    for (const auto& k : kids) t.children.push_back(parse_tree(k, path));
    return t;
  }
  const json& g = field(j, path, "gen");
  if (!g.is_string()) field_error(path, "gen", "expected a generator name");
  std::string name = g.get<std::string>();
  auto labels_of = [&]() {
    std::vector<Brane> labels;
    const json& arr = field(j, path, "labels");
    if (!arr.is_array()) field_error(path, "labels", "expected an array of brane labels");
    for (const auto& l : arr) {
      if (!l.is_number_unsigned()) field_error(path, "labels", "labels are brane indices");
      labels.push_back(l.get<std::size_t>());
    }
    return labels;
  };
  if (name == "disc_all_in") return leaf(disc_all_in(labels_of()));
  if (name == "disc_plus") return leaf(disc_plus(labels_of()));
  if (name == "annulus") return leaf(annulus_gen(labels_of()));
  if (name == "twisted_disc" || name == "disc_in2" || name == "disc_out2") {
    auto labels = labels_of();
    if (labels.size() != 2) field_error(path, "labels", name + " takes exactly two labels");
    if (name == "twisted_disc") return leaf(twisted_disc(labels[0], labels[1]));
    if (name == "disc_in2") return leaf(disc_in2(labels[0], labels[1]));
    return leaf(disc_out2(labels[0], labels[1]));
  }
  if (name == "identity") return leaf(identity_gen(parse_object(j, path, "identity")));
  if (name == "permute") {
    ObjectLabel obj = parse_object(j, path, "permute");
    const json& pj = field(j, path, "perm");
    if (!pj.is_array() || pj.size() != obj.open.size())
      field_error(path, "perm", "expected one slot index per open point");
    std::vector<std::size_t> perm;
    for (const auto& p : pj) perm.push_back(index_field(p, path, "perm", obj.open.size()));
    return leaf(permute_gen(obj, perm));
  }
  field_error(path, "gen", "unknown generator '" + name + "'");
}

json object_to_json(const ObjectLabel& obj) {
  json pts = json::array();
  for (const auto& p : obj.open) pts.push_back(json::array({p.s, p.t}));
  return pts;
}

json tree_to_json(const Tree& t) {
  if (t.kind == Tree::Kind::Compose || t.kind == Tree::Kind::Tensor) {
    json kids = json::array();
    for (const auto& k : t.children) kids.push_back(tree_to_json(k));
    return {{t.kind == Tree::Kind::Compose ? "compose" : "tensor", kids}};
  }
  const Generator& g = t.gen;
  json j{{"gen", kind_name(g.kind)}};
  switch (g.kind) {
    case Generator::Kind::Identity:
      j["points"] = object_to_json(g.object);
      if (g.object.closed) j["closed"] = g.object.closed;
      break;
    case Generator::Kind::Permute:
      j["points"] = object_to_json(g.object);
      if (g.object.closed) j["closed"] = g.object.closed;
      j["perm"] = g.perm;
      break;
    default:
      j["labels"] = g.labels;
  }
  return j;
}

std::string tree_to_text(const Tree& t) {
  if (t.kind == Tree::Kind::Compose || t.kind == Tree::Kind::Tensor) {
    std::string s = t.kind == Tree::Kind::Compose ? "Compose[" : "Tensor[";
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i) s += ", ";
      s += tree_to_text(t.children[i]);
    }
    return s + "]";
  }
  const Generator& g = t.gen;
  switch (g.kind) {
    case Generator::Kind::Identity:
    case Generator::Kind::Permute: {
      std::string s = g.kind == Generator::Kind::Identity ? "Identity(" : "Permute(";
      for (std::size_t i = 0; i < g.object.open.size(); ++i) {
        if (i) s += ",";
        s += "(" + std::to_string(g.object.open[i].s) + "," + std::to_string(g.object.open[i].t) +
             ")";
      }
      if (g.object.closed) s += ";closed=" + std::to_string(g.object.closed);
      if (g.kind == Generator::Kind::Permute) {
        s += ";perm=";
        for (std::size_t i = 0; i < g.perm.size(); ++i)
          s += (i ? "," : "") + std::to_string(g.perm[i]);
      }
      return s + ")";
    }
    default: {
      std::string s = kind_name(g.kind);
      s[0] = static_cast<char>(std::toupper(s[0]));
      for (std::size_t i = s.find('_'); i != std::string::npos; i = s.find('_')) {
        s.erase(i, 1);
        if (i < s.size()) s[i] = static_cast<char>(std::toupper(s[i]));
      }
      s += "(";
      for (std::size_t i = 0; i < g.labels.size(); ++i)
        s += (i ? "," : "") + std::to_string(g.labels[i]);
      return s + ")";
    }
  }
}

}  // namespace

MorphismWord load_word(const std::string& path) {
  json j = parse_document(path, "word");
  const json& terms = field(j, path, "terms");
  if (!terms.is_array() || terms.empty()) field_error(path, "terms", "expected a nonempty array");
  MorphismWord w;
  bool first = true;
  for (const auto& term : terms) {
    Rational coef = rational_field(field(term, path, "terms.coef"), path, "terms.coef");
    Tree tree = parse_tree(field(term, path, "terms.tree"), path);
    MorphismWord one = word_of(coef, tree);
    try {
      w = first ? one : add(w, one);
    } catch (const std::runtime_error& e) {
      field_error(path, "terms", e.what());
    }
    first = false;
  }
  return w;
}

std::string word_to_json(const MorphismWord& w) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "word";
  json terms = json::array();
  for (const auto& t : w.terms)
    terms.push_back({{"coef", rational_to_string(t.coef)}, {"tree", tree_to_json(t.tree)}});
  j["terms"] = terms;
  return j.dump(2) + "\n";
}

std::string render_word(const MorphismWord& w) {
  if (w.terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < w.terms.size(); ++i) {
    if (i) s += "\n+ ";
    s += rational_to_string(w.terms[i].coef) + " * " + tree_to_text(w.terms[i].tree);
  }
  return s;
}

}  // namespace klein::io
