#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "dvr/cli.hpp"

namespace dvr::cli {

namespace {

struct Token {
  std::string text;
  int col;  // 1-based
};

struct Line {
  int number;
  std::string raw;  // comment stripped
  std::vector<Token> tokens;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string raw(text.substr(pos, end - pos));
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    Line ln{number, raw, {}};
    for (std::size_t i = 0; i < raw.size();) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      ln.tokens.push_back({raw.substr(i, j - i), int(i) + 1});
      i = j;
    }
    if (!ln.tokens.empty()) out.push_back(std::move(ln));
    pos = end + 1;
  }
  return out;
}

int parse_int(const Token& t, int line, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(t.text, &used);
    if (used == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(std::string("expected an integer ") + what + ", got '" + t.text + "'", line, t.col);
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return s != "u" && s != "T" && s != "O";
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

void expect_tokens(const Line& ln, std::size_t n, const char* usage) {
  if (ln.tokens.size() != n)
    throw InputError(std::string("expected `") + usage + "`", ln.number, ln.tokens[0].col);
}

template <class F>
USeries<F> parse_at(std::string_view text, const FieldConfig& cfg, int line, int col) {
  try {
    return parse_series<F>(text, cfg);
  } catch (const InputError& e) {
    throw InputError(e.what(), line, col);
  } catch (const ConfigError& e) {
    throw InputError(e.what(), line, col);
  }
}

FieldConfig parse_field(const Line& ln) {
  const auto& t = ln.tokens;
  if (t.size() < 2) throw InputError("expected `field rational` or `field novikov ...`", ln.number, t[0].col);
  if (t[1].text == "rational") {
    expect_tokens(ln, 2, "field rational");
    return FieldConfig::rational();
  }
  if (t[1].text != "novikov")
    throw InputError("unknown field '" + t[1].text + "'", ln.number, t[1].col);
  int grading = 0;
  Rational tprec(16);
  for (std::size_t i = 2; i < t.size(); ++i) {
    const std::string& s = t[i].text;
    auto eq = s.find('=');
    std::string key = s.substr(0, eq), val = eq == std::string::npos ? "" : s.substr(eq + 1);
    if (key == "grading") {
      if (val != "0" && val != "2") throw InputError("grading must be 0 or 2", ln.number, t[i].col);
      grading = val == "0" ? 0 : 2;
    } else if (key == "tprec") {
      try {
        tprec = Rational::parse(val);
      } catch (const std::exception& e) {
        throw InputError(std::string("bad tprec: ") + e.what(), ln.number, t[i].col);
      }
    } else {
      throw InputError("unknown field option '" + s + "'", ln.number, t[i].col);
    }
  }
  FieldConfig cfg = FieldConfig::novikov(tprec, grading);
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw InputError(e.what(), ln.number, t[0].col);
  }
  return cfg;
}

template <class F>
struct MatrixBuilder {
  int rows = 0, cols = 0, line = 0;
  std::map<std::pair<int, int>, USeries<F>> entries;

  DVRMatrix<F> build(const FieldConfig& cfg) const {
    DVRMatrix<F> m(rows, cols, cfg);
    for (auto& [ij, v] : entries) m(ij.first, ij.second) = v;
    return m;
  }
};

struct DiffLine {
  std::string target, rhs;
  int line, target_col, rhs_col;
};

template <class F>
struct ComplexBuilder {
  std::string name;
  std::vector<Generator> gens;
  std::vector<int> gen_lines;
  std::vector<DiffLine> diffs;
  int line = 0;
};

template <class F>
struct SystemBuilder {
  int rank = 0, line = 0;
  std::vector<std::optional<MatrixBuilder<F>>> steps;
};

template <class F>
struct MapBuilder {
  std::vector<Generator> gens;
  std::optional<MatrixBuilder<F>> matrix;
  std::optional<FGModuleShape> codomain;
  int line = 0;
};

struct TermText {
  std::string text;
  bool negative;
  int col;
};

// Top-level signed terms of a sum; unary signs and signs inside
// parentheses or right after `^`/`*` are kept in the term.
std::vector<TermText> split_terms(const std::string& s, int base_col, int line) {
  std::vector<TermText> out;
  int depth = 0;
  bool negative = false;
  std::size_t start = 0;
  char prev = 0;
  bool seen = false;
  auto flush = [&](std::size_t end) {
    std::string t = trim(std::string_view(s).substr(start, end - start));
    if (t.empty()) throw InputError("empty term", line, base_col + int(start));
    std::size_t lead = s.find_first_not_of(" \t", start);
    out.push_back({t, negative, base_col + int(lead)});
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw InputError("unbalanced ')'", line, base_col + int(i));
    if (depth == 0 && (c == '+' || c == '-') && prev != '^' && prev != '*' && prev != '(') {
      if (!seen) {
        negative = c == '-';
        start = i + 1;
      } else {
        flush(i);
        negative = c == '-';
        start = i + 1;
      }
      prev = c;
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) {
      seen = true;
      prev = c;
    }
  }
  if (depth != 0) throw InputError("unbalanced '('", line, base_col);
  if (!seen) throw InputError("empty differential", line, base_col);
  flush(s.size());
  return out;
}

template <class F>
EqChainComplex<F> build_complex(const ComplexBuilder<F>& b, const FieldConfig& cfg) {
  EqChainComplex<F> C;
  C.name = b.name;
  C.gens = b.gens;
  const int n = int(b.gens.size());
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index[b.gens[i].name] = i;
  C.d = DVRMatrix<F>(n, n, cfg);
  std::vector<bool> seen(n, false);
  for (const DiffLine& dl : b.diffs) {
    auto it = index.find(dl.target);
    if (it == index.end())
      throw InputError("diff of undeclared generator '" + dl.target + "'", dl.line, dl.target_col);
    const int j = it->second;
    if (seen[j]) throw InputError("second diff for '" + dl.target + "'", dl.line, dl.target_col);
    seen[j] = true;
    for (const TermText& t : split_terms(dl.rhs, dl.rhs_col, dl.line)) {
      std::string coef = "1", id = t.text;
      int depth = 0;
      for (std::size_t i = t.text.size(); i-- > 0;) {
        char c = t.text[i];
        if (c == ')') ++depth;
        if (c == '(') --depth;
        if (c == '*' && depth == 0) {
          coef = trim(std::string_view(t.text).substr(0, i));
          id = trim(std::string_view(t.text).substr(i + 1));
          break;
        }
      }
      if (!is_identifier(id)) throw InputError("term '" + t.text + "' names no generator", dl.line, t.col);
      auto g = index.find(id);
      if (g == index.end()) throw InputError("unknown generator '" + id + "'", dl.line, t.col);
      USeries<F> c = parse_at<F>(coef, cfg, dl.line, t.col);
      if (!c.exact()) throw InputError("O-terms are not allowed in a differential", dl.line, t.col);
      if (t.negative) c = -c;
      C.d(g->second, j) = C.d(g->second, j) + c;
    }
  }
  try {
    C.validate();
  } catch (const InputError& e) {
    // Point at the diff line of the offending source generator when the message names one.
    int line = b.line, col = 1;
    const std::string msg = e.what();
    for (const DiffLine& dl : b.diffs)
      if (msg.find("d(" + dl.target + ")") != std::string::npos) {
        line = dl.line;
        col = dl.rhs_col;
        break;
      }
    throw InputError("complex " + b.name + ": " + msg, line, col);
  }
  return C;
}

std::vector<int> parse_int_list(std::string_view s, int line, int col) {
  std::vector<int> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(parse_int({trim(cur), col}, line, "in a shape list"));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(parse_int({trim(cur), col}, line, "in a shape list"));
  else if (!out.empty()) throw InputError("trailing ',' in a shape list", line, col);
  return out;
}

FGModuleShape parse_shape_at(std::string_view text, int line, int col) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.rfind("shape", 0) == 0) s = s.substr(5);
  FGModuleShape out;
  std::map<std::string, bool> seen;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t colon = s.find(':', i);
    if (colon == std::string::npos) throw InputError("expected `key:[...]` in a shape", line, col);
    std::string key = s.substr(i, colon - i);
    if (colon + 1 >= s.size() || s[colon + 1] != '[')
      throw InputError("expected '[' after '" + key + ":'", line, col);
    std::size_t close = s.find(']', colon);
    if (close == std::string::npos) throw InputError("missing ']' in a shape", line, col);
    std::string body = s.substr(colon + 2, close - colon - 2);
    if (seen[key]) throw InputError("shape key '" + key + "' given twice", line, col);
    seen[key] = true;
    if (key == "free") out.free_power = parse_int_list(body, line, col);
    else if (key == "laurent") out.free_laurent = parse_int_list(body, line, col);
    else if (key == "tails") out.tails = parse_int_list(body, line, col);
    else if (key == "torsion") {
      std::size_t p = 0;
      while (p < body.size()) {
        if (body[p] == ',') {
          ++p;
          continue;
        }
        if (body[p] != '(') throw InputError("torsion entries are `(k,d)`", line, col);
        std::size_t q = body.find(')', p);
        if (q == std::string::npos) throw InputError("missing ')' in a torsion entry", line, col);
        std::vector<int> kd = parse_int_list(body.substr(p + 1, q - p - 1), line, col);
        if (kd.size() != 2 || kd[0] < 1) throw InputError("torsion entries are `(k,d)` with k >= 1", line, col);
        out.torsion.push_back({kd[0], kd[1]});
        p = q + 1;
      }
    } else {
      throw InputError("unknown shape key '" + key + "'", line, col);
    }
    i = close + 1;
  }
  out.normalize();
  return out;
}

template <class F>
class Parser {
 public:
  explicit Parser(const std::vector<Line>& lines) : lines_(lines) {}

  Document<F> parse() {
    for (const Line& ln : lines_) handle(ln);
    finish();
    return std::move(doc_);
  }

 private:
  enum class Top { none, matrix, complex, system, map };

  void handle(const Line& ln) {
    const Token& head = ln.tokens[0];
    const std::string& d = head.text;
    if (d == "field") {
      if (field_seen_ || top_ != Top::none || !doc_.blocks.empty())
        throw InputError("`field` must come first and only once", ln.number, head.col);
      field_seen_ = true;
      doc_.field = parse_field(ln);
      return;
    }
    if (d == "uprec") {
      if (top_ != Top::none || !doc_.blocks.empty())
        throw InputError("`uprec` must precede every block", ln.number, head.col);
      expect_tokens(ln, 2, "uprec <int>");
      int p = parse_int(ln.tokens[1], ln.number, "precision");
      if (p < 1) throw InputError("uprec must be positive", ln.number, ln.tokens[1].col);
      doc_.uprec = p;
      doc_.uprec_set = true;
      return;
    }
    if (d == "matrix") {
      expect_tokens(ln, 3, "matrix <rows> <cols>");
      MatrixBuilder<F> mb;
      mb.rows = parse_int(ln.tokens[1], ln.number, "row count");
      mb.cols = parse_int(ln.tokens[2], ln.number, "column count");
      mb.line = ln.number;
      if (mb.rows < 1 || mb.cols < 1) throw InputError("matrix dimensions must be positive", ln.number, head.col);
      if (top_ == Top::system && !sys_.steps.empty() && !sys_.steps.back()) {
        if (mb.rows != sys_.rank || mb.cols != sys_.rank)
          throw InputError("step matrix must be " + std::to_string(sys_.rank) + "x" + std::to_string(sys_.rank),
                           ln.number, head.col);
        sys_.steps.back() = mb;
        active_ = &*sys_.steps.back();
        return;
      }
      if (top_ == Top::map && !map_.matrix) {
        map_.matrix = mb;
        active_ = &*map_.matrix;
        return;
      }
      finish();
      top_ = Top::matrix;
      mat_ = mb;
      active_ = &mat_;
      return;
    }
    if (d == "complex") {
      expect_tokens(ln, 2, "complex <name>");
      finish();
      top_ = Top::complex;
      cpx_ = {};
      cpx_.name = ln.tokens[1].text;
      cpx_.line = ln.number;
      return;
    }
    if (d == "gen") {
      if (top_ != Top::complex && top_ != Top::map)
        throw InputError("`gen` outside a complex or map block", ln.number, head.col);
      if (ln.tokens.size() != 4 || ln.tokens[2].text != "deg")
        throw InputError("expected `gen <id> deg <int>`", ln.number, head.col);
      const Token& id = ln.tokens[1];
      if (!is_identifier(id.text)) throw InputError("bad generator name '" + id.text + "'", ln.number, id.col);
      auto& gens = top_ == Top::complex ? cpx_.gens : map_.gens;
      for (auto& g : gens)
        if (g.name == id.text) throw InputError("duplicate generator '" + id.text + "'", ln.number, id.col);
      gens.push_back({id.text, parse_int(ln.tokens[3], ln.number, "degree")});
      active_ = nullptr;
      return;
    }
    if (d == "diff") {
      if (top_ != Top::complex) throw InputError("`diff` outside a complex block", ln.number, head.col);
      auto eq = ln.raw.find('=');
      if (ln.tokens.size() < 4 || ln.tokens[2].text != "=" || eq == std::string::npos)
        throw InputError("expected `diff <id> = <terms>`", ln.number, head.col);
      cpx_.diffs.push_back({ln.tokens[1].text, ln.raw.substr(eq + 1), ln.number, ln.tokens[1].col, int(eq) + 2});
      return;
    }
    if (d == "system") {
      if (ln.tokens.size() != 3 || ln.tokens[1].text != "rank")
        throw InputError("expected `system rank <r>`", ln.number, head.col);
      finish();
      top_ = Top::system;
      sys_ = {};
      sys_.rank = parse_int(ln.tokens[2], ln.number, "rank");
      sys_.line = ln.number;
      if (sys_.rank < 1) throw InputError("system rank must be positive", ln.number, ln.tokens[2].col);
      return;
    }
    if (d == "step") {
      if (top_ != Top::system) throw InputError("`step` outside a system block", ln.number, head.col);
      expect_tokens(ln, 2, "step <k>");
      int k = parse_int(ln.tokens[1], ln.number, "step index");
      if (k != int(sys_.steps.size()))
        throw InputError("expected step " + std::to_string(sys_.steps.size()), ln.number, ln.tokens[1].col);
      if (!sys_.steps.empty() && !sys_.steps.back())
        throw InputError("step " + std::to_string(k - 1) + " has no matrix", ln.number, head.col);
      sys_.steps.emplace_back();
      active_ = nullptr;
      return;
    }
    if (d == "map") {
      expect_tokens(ln, 1, "map");
      finish();
      top_ = Top::map;
      map_ = {};
      map_.line = ln.number;
      return;
    }
    if (d == "codomain") {
      if (top_ != Top::map) throw InputError("`codomain` outside a map block", ln.number, head.col);
      if (map_.codomain) throw InputError("second codomain", ln.number, head.col);
      std::size_t at = ln.raw.find("codomain") + 8;
      map_.codomain = parse_shape_at(std::string_view(ln.raw).substr(at), ln.number, int(at) + 1);
      active_ = nullptr;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(d[0]))) {
      entry(ln);
      return;
    }
    throw InputError("unknown directive '" + d + "'", ln.number, head.col);
  }

  void entry(const Line& ln) {
    const Token& head = ln.tokens[0];
    if (!active_) throw InputError("matrix entry outside a matrix block", ln.number, head.col);
    auto eq = ln.raw.find('=');
    if (ln.tokens.size() < 4 || ln.tokens[2].text != "=" || eq == std::string::npos)
      throw InputError("expected `<row> <col> = <series>`", ln.number, head.col);
    int r = parse_int(ln.tokens[0], ln.number, "row"), c = parse_int(ln.tokens[1], ln.number, "column");
    if (r < 1 || r > active_->rows) throw InputError("row out of range", ln.number, ln.tokens[0].col);
    if (c < 1 || c > active_->cols) throw InputError("column out of range", ln.number, ln.tokens[1].col);
    std::string rhs = ln.raw.substr(eq + 1);
    USeries<F> v = parse_at<F>(rhs, doc_.field, ln.number, int(eq) + 2);
    if (!active_->entries.emplace(std::pair{r - 1, c - 1}, v).second)
      throw InputError("entry (" + std::to_string(r) + ", " + std::to_string(c) + ") given twice", ln.number,
                       head.col);
  }

  void finish() {
    const FieldConfig& cfg = doc_.field;
    switch (top_) {
      case Top::none: break;
      case Top::matrix: doc_.blocks.push_back(MatrixBlock<F>{mat_.build(cfg), mat_.line}); break;
      case Top::complex: doc_.blocks.push_back(ComplexBlock<F>{build_complex(cpx_, cfg), cpx_.line}); break;
      case Top::system: {
        if (sys_.steps.empty()) throw InputError("system without steps", sys_.line, 1);
        SystemBlock<F> b;
        b.rank = sys_.rank;
        b.line = sys_.line;
        for (std::size_t k = 0; k < sys_.steps.size(); ++k) {
          if (!sys_.steps[k]) throw InputError("step " + std::to_string(k) + " has no matrix", sys_.line, 1);
          b.steps.push_back(sys_.steps[k]->build(cfg));
        }
        doc_.blocks.push_back(std::move(b));
        break;
      }
      case Top::map: {
        if (!map_.matrix) throw InputError("map without a matrix", map_.line, 1);
        if (!map_.codomain) throw InputError("map without a codomain", map_.line, 1);
        MapBlock<F> b{map_.gens, map_.matrix->build(cfg), *map_.codomain, map_.line};
        if (!b.domain.empty() && int(b.domain.size()) != b.m.cols())
          throw InputError("map has " + std::to_string(b.domain.size()) + " domain generators but " +
                               std::to_string(b.m.cols()) + " columns",
                           map_.line, 1);
        const FGModuleShape& W = b.codomain;
        if (!W.free_laurent.empty() || !W.tails.empty())
          throw InputError("codomain must be free or torsion (no laurent or tails)", map_.line, 1);
        if (int(W.free_power.size() + W.torsion.size()) != b.m.rows())
          throw InputError("codomain has " + std::to_string(W.total_rank()) + " summands but the matrix has " +
                               std::to_string(b.m.rows()) + " rows",
                           map_.line, 1);
        doc_.blocks.push_back(std::move(b));
        break;
      }
    }
    top_ = Top::none;
    active_ = nullptr;
  }

  const std::vector<Line>& lines_;
  Document<F> doc_;
  bool field_seen_ = false;
  Top top_ = Top::none;
  MatrixBuilder<F> mat_;
  ComplexBuilder<F> cpx_;
  SystemBuilder<F> sys_;
  MapBuilder<F> map_;
  MatrixBuilder<F>* active_ = nullptr;
};

std::string strip_t_precision(std::string s) {
  if (s.rfind("O(T^", 0) == 0) return "0";
  if (auto p = s.find(" + O(T^"); p != std::string::npos) s.resize(p);
  return s;
}

template <class F>
std::string coefficient_text(const F& c) {
  if constexpr (std::is_same_v<F, Rational>) {
    return c.to_string();
  } else {
    return "(" + strip_t_precision(c.to_string()) + ")";
  }
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

template <class F>
void render_matrix(std::ostringstream& os, const DVRMatrix<F>& m) {
  os << "matrix " << m.rows() << " " << m.cols() << "\n";
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_exact_zero()) os << i + 1 << " " << j + 1 << " = " << render_series(m(i, j)) << "\n";
}

template <class F>
void render_complex(std::ostringstream& os, const EqChainComplex<F>& C) {
  os << "complex " << C.name << "\n";
  for (auto& g : C.gens) os << "gen " << g.name << " deg " << g.degree << "\n";
  for (int j = 0; j < C.size(); ++j) {
    std::string rhs;
    for (int i = 0; i < C.size(); ++i)
      for (auto& [k, c] : C.d(i, j).terms()) {
        std::string coef;
        bool negative = false;
        if constexpr (std::is_same_v<F, Rational>) {
          negative = c.sign() < 0;
          coef = (negative ? -c : c).to_string();
        } else {
          coef = coefficient_text(c);
        }
        std::string term = coef + (k ? "*u^" + std::to_string(k) : "") + "*" + C.gens[i].name;
        if (rhs.empty()) rhs = (negative ? "-" : "") + term;
        else rhs += (negative ? " - " : " + ") + term;
      }
    if (!rhs.empty()) os << "diff " << C.gens[j].name << " = " << rhs << "\n";
  }
}

template <class F>
std::string render_typed(const Document<F>& doc) {
  std::ostringstream os;
  if (doc.field.kind == FieldKind::rational) os << "field rational\n";
  else os << "field novikov grading=" << doc.field.t_grading << " tprec=" << doc.field.t_precision.to_string() << "\n";
  if (doc.uprec_set) os << "uprec " << doc.uprec << "\n";
  for (const auto& b : doc.blocks) {
    os << "\n";
    std::visit(
        [&](const auto& blk) {
          using B = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<B, MatrixBlock<F>>) {
            render_matrix(os, blk.m);
          } else if constexpr (std::is_same_v<B, ComplexBlock<F>>) {
            render_complex(os, blk.complex);
          } else if constexpr (std::is_same_v<B, SystemBlock<F>>) {
            os << "system rank " << blk.rank << "\n";
            for (std::size_t k = 0; k < blk.steps.size(); ++k) {
              os << "step " << k << "\n";
              render_matrix(os, blk.steps[k]);
            }
          } else {
            os << "map\n";
            for (auto& g : blk.domain) os << "gen " << g.name << " deg " << g.degree << "\n";
            render_matrix(os, blk.m);
            os << "codomain shape " << render_shape(blk.codomain) << "\n";
          }
        },
        b);
  }
  return os.str();
}

bool same_gens(const std::vector<Generator>& a, const std::vector<Generator>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].degree != b[i].degree) return false;
  return true;
}

}  // namespace

template <class F>
std::string render_series(const USeries<F>& s) {
  if constexpr (std::is_same_v<F, Rational>) {
    return s.to_string();
  } else {
    std::string out;
    for (auto& [k, c] : s.terms()) {
      if (!out.empty()) out += " + ";
      out += coefficient_text(c) + (k ? "*u^" + std::to_string(k) : "");
    }
    if (!s.exact()) out += (out.empty() ? "" : " + ") + std::string("O(u^") + std::to_string(s.precision()) + ")";
    return out.empty() ? "0" : out;
  }
}

std::string render_shape(const FGModuleShape& s) {
  std::string t;
  for (std::size_t i = 0; i < s.torsion.size(); ++i)
    t += (i ? "," : "") + std::string("(") + std::to_string(s.torsion[i].first) + "," +
         std::to_string(s.torsion[i].second) + ")";
  return "free:[" + join(s.free_power) + "] laurent:[" + join(s.free_laurent) + "] tails:[" + join(s.tails) +
         "] torsion:[" + t + "]";
}

FGModuleShape parse_shape(std::string_view text) { return parse_shape_at(text, 0, 0); }

template <class F>
bool same_document(const Document<F>& a, const Document<F>& b) {
  if (!(a.field == b.field) || a.uprec != b.uprec || a.uprec_set != b.uprec_set ||
      a.blocks.size() != b.blocks.size())
    return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].index() != b.blocks[i].index()) return false;
    bool same = std::visit(
        [&](const auto& x) {
          using B = std::decay_t<decltype(x)>;
          const B& y = std::get<B>(b.blocks[i]);
          if constexpr (std::is_same_v<B, MatrixBlock<F>>) {
            return x.m == y.m;
          } else if constexpr (std::is_same_v<B, ComplexBlock<F>>) {
            return x.complex.name == y.complex.name && same_gens(x.complex.gens, y.complex.gens) &&
                   x.complex.d == y.complex.d;
          } else if constexpr (std::is_same_v<B, SystemBlock<F>>) {
            return x.rank == y.rank && x.steps == y.steps;
          } else {
            return same_gens(x.domain, y.domain) && x.m == y.m && x.codomain == y.codomain;
          }
        },
        a.blocks[i]);
    if (!same) return false;
  }
  return true;
}

AnyDocument parse_document(std::string_view text) {
  std::vector<Line> lines = split_lines(text);
  bool novikov = false;
  for (const Line& ln : lines)
    if (ln.tokens[0].text == "field") {
      novikov = ln.tokens.size() >= 2 && ln.tokens[1].text == "novikov";
      break;
    }
  if (novikov) return Parser<NovikovElem>(lines).parse();
  return Parser<Rational>(lines).parse();
}

std::string render_document(const AnyDocument& doc) {
  return std::visit([](const auto& d) { return render_typed(d); }, doc);
}

bool same_document(const AnyDocument& a, const AnyDocument& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using D = std::decay_t<decltype(x)>;
        return same_document(x, std::get<D>(b));
      },
      a);
}

template std::string render_series<Rational>(const USeries<Rational>&);
template std::string render_series<NovikovElem>(const USeries<NovikovElem>&);
template bool same_document<Rational>(const Document<Rational>&, const Document<Rational>&);
template bool same_document<NovikovElem>(const Document<NovikovElem>&, const Document<NovikovElem>&);

}  // namespace dvr::cli
