#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "dvr/cli.hpp"
#include "dvr/filtration.hpp"
#include "dvr/floerlab.hpp"
#include "dvr/limits.hpp"
#include "dvr/sampling.hpp"

namespace dvr::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Entry {
  std::string key, text;
  Json value;
};

struct Section {
  std::string title;
  std::vector<Entry> entries;

  void add(std::string key, std::string text, Json value) {
    entries.push_back({std::move(key), std::move(text), std::move(value)});
  }
  void add(std::string key, const std::string& text) { add(std::move(key), text, Json(text)); }
  void add(std::string key, int v) { add(std::move(key), std::to_string(v), Json(v)); }
  void add(std::string key, bool v) { add(std::move(key), v ? "yes" : "no", Json(v)); }
};

struct Report {
  std::string command;
  std::vector<Section> sections;

  Section& section(std::string title) {
    sections.push_back({std::move(title), {}});
    return sections.back();
  }

  std::string text() const {
    std::ostringstream os;
    for (std::size_t s = 0; s < sections.size(); ++s) {
      if (s) os << "\n";
      os << "[" << sections[s].title << "]\n";
      for (const Entry& e : sections[s].entries) {
        if (e.text.find('\n') == std::string::npos) {
          os << "  " << e.key << ": " << e.text << "\n";
          continue;
        }
        os << "  " << e.key << ":\n";
        std::istringstream lines(e.text);
        for (std::string ln; std::getline(lines, ln);) os << "    " << ln << "\n";
      }
    }
    return os.str();
  }

  std::string json() const {
    Json out;
    out["command"] = command;
    out["sections"] = Json::array();
    for (const Section& s : sections) {
      Json entries = Json::object();
      for (const Entry& e : s.entries) entries[e.key] = e.value;
      out["sections"].push_back(Json{{"title", s.title}, {"entries", entries}});
    }
    return out.dump(2) + "\n";
  }
};

struct Options {
  std::string input;
  std::string example;
  std::string params;
  bool json = false;
  std::optional<std::uint64_t> seed;
  int window = -1;
  std::optional<int> degmin, degmax;
  std::string model = "all";
  int page = 2;
  std::optional<int> k;
  std::string weight;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json exponents_json(const std::vector<int>& e) {
  Json a = Json::array();
  for (int x : e) a.push_back(x == kInfinite ? Json(nullptr) : Json(x));
  return a;
}

Json shape_json(const FGModuleShape& s) {
  Json t = Json::array();
  for (auto& [k, d] : s.torsion) t.push_back(Json{{"k", k}, {"degree", d}});
  return Json{{"free", s.free_power}, {"laurent", s.free_laurent}, {"tails", s.tails}, {"torsion", t}};
}

void add_shape(Section& sec, const std::string& key, const FGModuleShape& s) {
  sec.add(key, s.to_string(), shape_json(s));
}

void add_poly(Section& sec, const std::string& key, const IntPoly& p) {
  sec.add(key, p.to_string(), Json(p.coeffs));
}

Weight parse_weight(const std::string& text) {
  Weight w;
  if (text.empty()) return w;
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("comma");
    std::size_t ua = 0, ub = 0;
    std::string sa = text.substr(0, comma), sb = text.substr(comma + 1);
    w.a = std::stoi(sa, &ua);
    w.b = std::stoi(sb, &ub);
    if (ua != sa.size() || ub != sb.size()) throw std::invalid_argument("junk");
  } catch (const std::exception&) {
    throw InputError("--weight expects `a,b`, got '" + text + "'");
  }
  return w;
}

// Rethrows e with a prefix, keeping its type.
[[noreturn]] void rethrow_with(const std::string& context) {
  try {
    throw;
  } catch (const InputError& e) {
    throw InputError(context + ": " + e.what());
  } catch (const PrecisionError& e) {
    throw PrecisionError(context + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw InvariantError(context + ": " + e.what());
  }
}

template <class Fn>
void in_block(const std::string& context, Fn&& fn) {
  try {
    fn();
  } catch (...) {
    rethrow_with(context);
  }
}

template <class F>
SNFOptions snf_options(const Document<F>& doc) {
  SNFOptions o;
  o.precision = doc.uprec;
  return o;
}

template <class F>
std::string block_title(const char* kind, int index, int line) {
  return std::string(kind) + " " + std::to_string(index) + " (line " + std::to_string(line) + ")";
}

// ---------------------------------------------------------------------------
// snf

template <class F>
void snf_matrix(Report& rep, const DVRMatrix<F>& A, const SNFOptions& opt, const std::string& title) {
  Section& sec = rep.section(title);
  sec.add("size", std::to_string(A.rows()) + "x" + std::to_string(A.cols()),
          Json::array({A.rows(), A.cols()}));
  in_block(title, [&] {
    SNFResult<F> r = smith_normal_form(A, opt);
    sec.add("invariant_factors", exponents_to_string(r.exponents), exponents_json(r.exponents));
    sec.add("rank", r.rank());
    sec.add("kernel_rank", r.count_infinite());
    bool exact = true;
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j) exact = exact && A(i, j).exact();
    if (exact && A.rows() <= 6 && A.cols() <= 6) {
      std::vector<int> minors = factors_via_minors(A);
      if (minors != r.exponents)
        throw InvariantError("minors give " + exponents_to_string(minors) + ", elimination gives " +
                             exponents_to_string(r.exponents));
      sec.add("minors_check", std::string("agree"));
    }
    if (A.rows() == A.cols()) {
      Determinant<F> d = det(A);
      sec.add("det_order", d.order.to_string());
    }
  });
}

template <class F>
void cmd_snf(Report& rep, const Document<F>& doc, const Options&) {
  const SNFOptions opt = snf_options(doc);
  int n = 0;
  for (const auto& b : doc.blocks) {
    if (auto* m = std::get_if<MatrixBlock<F>>(&b)) {
      snf_matrix(rep, m->m, opt, block_title<F>("matrix", ++n, m->line));
    } else if (auto* c = std::get_if<ComplexBlock<F>>(&b)) {
      snf_matrix(rep, c->complex.d, opt, block_title<F>("complex", ++n, c->line) + " " + c->complex.name);
    } else if (auto* mp = std::get_if<MapBlock<F>>(&b)) {
      snf_matrix(rep, mp->m, opt, block_title<F>("map", ++n, mp->line));
    }
  }
  if (!n) throw InputError("snf needs a matrix, complex or map block");
}

// ---------------------------------------------------------------------------
// homology

std::vector<std::string> selected_models(const std::string& model) {
  if (model == "all") return {"minus", "infty", "plus", "ord"};
  return {model};
}

template <class F>
void cmd_homology(Report& rep, const Document<F>& doc, const Options& o) {
  const SNFOptions opt = snf_options(doc);
  int n = 0;
  for (const auto& b : doc.blocks) {
    auto* cb = std::get_if<ComplexBlock<F>>(&b);
    if (!cb) continue;
    const EqChainComplex<F>& C = cb->complex;
    std::string title = block_title<F>("complex", ++n, cb->line) + " " + C.name;
    Section& sec = rep.section(title);
    in_block(title, [&] {
      std::vector<std::pair<std::string, FGModuleShape>> shapes;
      std::vector<DegreeCount> ord;
      bool have_ord = false;
      for (const std::string& m : selected_models(o.model)) {
        if (m == "minus") {
          auto h = homology_minus_detail(C, opt);
          shapes.emplace_back(m, h.shape);
          add_shape(sec, "W-", h.shape);
          sec.add("d_invariant_factors", exponents_to_string(h.exponents), exponents_json(h.exponents));
        } else if (m == "infty") {
          shapes.emplace_back(m, homology_infty(C, opt));
          add_shape(sec, "Winf", shapes.back().second);
        } else if (m == "plus") {
          shapes.emplace_back(m, homology_plus(C, opt));
          add_shape(sec, "W+", shapes.back().second);
        } else {
          ord = ordinary_cohomology(C);
          have_ord = true;
          std::string t;
          Json j = Json::array();
          for (auto& dc : ord) {
            t += (t.empty() ? "" : " ") + std::to_string(dc.degree) + ":" + std::to_string(dc.dim);
            j.push_back(Json{{"degree", dc.degree}, {"dim", dc.dim}});
          }
          sec.add("ord", t.empty() ? "0" : t, j);
        }
      }
      if (!o.degmin && !o.degmax) return;
      int lo = o.degmin.value_or(-10), hi = o.degmax.value_or(10);
      if (lo > hi) throw InputError("--degmin exceeds --degmax");
      std::ostringstream table;
      table << "deg";
      for (auto& [name, s] : shapes) table << " " << name;
      if (have_ord) table << " ord";
      Json rows = Json::array();
      for (int m = hi; m >= lo; --m) {
        table << "\n" << m;
        Json row{{"degree", m}};
        for (auto& [name, s] : shapes) {
          int d = s.dim_in_degree(m);
          table << " " << d;
          row[name] = d;
        }
        if (have_ord) {
          int d = 0;
          for (auto& dc : ord)
            if (dc.degree == m) d = dc.dim;
          table << " " << d;
          row["ord"] = d;
        }
        rows.push_back(row);
      }
      sec.add("degreewise", table.str(), rows);
      if (C.config().t_grading == 0) {
        LESReport les = check_les(C, lo, hi);
        if (les.ok) {
          sec.add("les", std::string("exact on [") + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                  Json(true));
        } else {
          sec.add("les", "fails at degree " + std::to_string(*les.first_failing_degree) + " in " +
                             les.failing_sequence + ": " + les.detail,
                  Json(false));
        }
      }
    });
  }
  if (!n) throw InputError("homology needs a complex block");
}

// ---------------------------------------------------------------------------
// filtration

std::string layers_text(const std::vector<Layer>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s.empty() ? "-" : s;
}

template <class F>
void filtration_report(Section& sec, const DVRMatrix<F>& c, const FGModuleShape& W,
                       const std::vector<int>& degrees, const SNFOptions& opt) {
  InducedFiltration<F> f = induced_filtration(c, W, degrees, opt);
  sec.add("exponents", exponents_to_string(f.exponents), Json(f.exponents));
  sec.add("kernel_rank", f.kernel_rank);
  SliceSeries s = slice_series(f);
  sec.add("s(t)", s.to_string(), Json{{"prefix", s.prefix}, {"tail", s.tail}});
  add_poly(sec, "s~(t)", reduced_slice(f));
  add_poly(sec, "f(t)", filtration_polynomial(f));
  if (f.kernel_rank == 0 && f.max_exponent() > 0) {
    YoungDiagramPair y = young_diagrams(f);
    sec.add("young", render_young(y.shape), Json(y.shape));
    sec.add("young_dual", render_young_french(y.dual), Json(y.dual));
  }
  std::ostringstream table;
  Json rows = Json::array();
  for (int j = -1; j <= f.max_exponent() + 1; ++j) {
    FiltrationTableColumn col = filtration_table(f, j);
    if (j > -1) table << "\n";
    table << "j=" << j << "  V-: " << layers_text(col.v_minus) << "  Vinf: " << layers_text(col.v_infty)
          << "  V+: " << layers_text(col.v_plus) << "  |  W-: " << col.w_minus.to_string()
          << "  Winf: " << col.w_infty.to_string() << "  W+: " << col.w_plus.to_string();
    rows.push_back(Json{{"j", j},
                        {"V-", layers_text(col.v_minus)},
                        {"Vinf", layers_text(col.v_infty)},
                        {"V+", layers_text(col.v_plus)},
                        {"W-", col.w_minus.to_string()},
                        {"Winf", col.w_infty.to_string()},
                        {"W+", col.w_plus.to_string()}});
  }
  sec.add("layers", table.str(), rows);
}

template <class F>
void cmd_filtration(Report& rep, const Document<F>& doc, const Options&) {
  const SNFOptions opt = snf_options(doc);
  int n = 0;
  for (const auto& b : doc.blocks) {
    if (auto* m = std::get_if<MatrixBlock<F>>(&b)) {
      std::string title = block_title<F>("matrix", ++n, m->line);
      Section& sec = rep.section(title);
      FGModuleShape W;
      W.free_power.assign(m->m.rows(), 0);
      in_block(title, [&] { filtration_report(sec, m->m, W, {}, opt); });
    } else if (auto* mp = std::get_if<MapBlock<F>>(&b)) {
      std::string title = block_title<F>("map", ++n, mp->line);
      Section& sec = rep.section(title);
      std::vector<int> degrees;
      for (auto& g : mp->domain) degrees.push_back(g.degree);
      add_shape(sec, "codomain", mp->codomain);
      in_block(title, [&] { filtration_report(sec, mp->m, mp->codomain, degrees, opt); });
    }
  }
  if (!n) throw InputError("filtration needs a matrix or map block");
}

// ---------------------------------------------------------------------------
// limit

void add_limit(Section& sec, const LimitShape& L) {
  sec.add("limit", L.to_string());
  sec.add("steps_used", L.steps_used);
  sec.add("window", L.window);
  std::string st;
  Json js = Json::array();
  for (auto s : L.status) {
    st += (st.empty() ? "" : " ") + status_name(s);
    js.push_back(status_name(s));
  }
  sec.add("status", st.empty() ? "-" : st, js);
  sec.add("certified", L.certified);
  if (L.kernel_rank) {
    sec.add("kernel_rank", L.kernel_rank);
    sec.add("failure_index", L.failure_index);
  }
}

template <class F>
void cmd_limit(Report& rep, const Document<F>& doc, const Options& o) {
  const SNFOptions opt = snf_options(doc);
  int n = 0;
  for (const auto& b : doc.blocks) {
    if (auto* sb = std::get_if<SystemBlock<F>>(&b)) {
      std::string title = block_title<F>("system", ++n, sb->line);
      Section& sec = rep.section(title);
      in_block(title, [&] {
        DirectedSystem<F> sys;
        sys.rank = sb->rank;
        sys.config = doc.field;
        sys.steps = sb->steps;
        sys.validate();
        const int K = o.k.value_or(int(sb->steps.size()));
        auto table = composite_factor_table(sys, K, Exec::parallel, opt);
        std::ostringstream os;
        Json rows = Json::array();
        for (std::size_t k = 0; k < table.size(); ++k) {
          if (k) os << "\n";
          os << "R_" << k << ": " << exponents_to_string(table[k]);
          rows.push_back(exponents_json(table[k]));
        }
        sec.add("composites", os.str(), rows);
        if (K >= 1) {
          add_limit(sec, limit_shape(sys, K, o.window));
          PersistenceLattice P = persistence_lattice(sys, K);
          std::string bars = P.barcode();
          sec.add("barcode", bars.empty() ? "-" : bars);
        }
      });
    } else if (auto* m = std::get_if<MatrixBlock<F>>(&b)) {
      std::string title = block_title<F>("matrix", ++n, m->line);
      Section& sec = rep.section(title);
      in_block(title, [&] { add_limit(sec, localise_at_element(m->m, o.k.value_or(8), o.window)); });
    }
  }
  if (!n) throw InputError("limit needs a system or matrix block");
}

// ---------------------------------------------------------------------------
// Example parameters: `key = v1, v2, ...` lines, `#` comments.

struct Params {
  struct Value {
    std::string text;
    int line;
  };
  std::map<std::string, Value> values;
  mutable std::map<std::string, bool> used;

  static Params parse(const std::string& text) {
    Params p;
    std::istringstream in(text);
    int line = 0;
    for (std::string ln; std::getline(in, ln);) {
      ++line;
      if (auto h = ln.find('#'); h != std::string::npos) ln.resize(h);
      if (ln.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto eq = ln.find('=');
      if (eq == std::string::npos) throw InputError("expected `key = value`", line, 1);
      std::string key = ln.substr(0, eq), val = ln.substr(eq + 1);
      auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
      };
      trim(key);
      trim(val);
      if (!p.values.emplace(key, Value{val, line}).second) throw InputError("key '" + key + "' given twice", line, 1);
    }
    return p;
  }

  bool has(const std::string& key) const { return values.count(key) > 0; }

  std::vector<std::string> list(const std::string& key, char sep = ',') const {
    used[key] = true;
    std::vector<std::string> out;
    std::string cur;
    for (char c : values.at(key).text) {
      if (c == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    for (auto& s : out) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    }
    return out;
  }

  std::vector<Rational> rationals(const std::string& key) const {
    std::vector<Rational> out;
    for (auto& s : list(key)) {
      try {
        out.push_back(Rational::parse(s));
      } catch (const std::exception& e) {
        throw InputError("bad rational '" + s + "' for " + key + ": " + e.what(), values.at(key).line, 1);
      }
    }
    return out;
  }

  std::vector<int> ints(const std::string& key) const {
    std::vector<int> out;
    for (auto& s : list(key)) {
      if (s.empty() && values.at(key).text.empty()) break;
      try {
        std::size_t u = 0;
        out.push_back(std::stoi(s, &u));
        if (u != s.size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        throw InputError("bad integer '" + s + "' for " + key, values.at(key).line, 1);
      }
    }
    return out;
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    auto v = ints(key);
    if (v.size() != 1) throw InputError(key + " takes one integer", values.at(key).line, 1);
    return v[0];
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    used[key] = true;
    try {
      std::size_t u = 0;
      double d = std::stod(values.at(key).text, &u);
      if (u != values.at(key).text.size() || d < 0 || d > 1) throw std::invalid_argument("range");
      return d;
    } catch (const std::exception&) {
      throw InputError(key + " takes a probability in [0, 1]", values.at(key).line, 1);
    }
  }

  void check_used() const {
    for (auto& [key, v] : values)
      if (!used[key]) throw InputError("unknown parameter '" + key + "' for this example", v.line, 1);
  }
};

std::string rationals_text(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s;
}

Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (auto& r : v) a.push_back(r.to_string());
  return a;
}

void check_ok(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what + " failed its checks (see report)");
}

CLabParams c_params(const Params& P, const Options& o, int k_max, Weight w) {
  CLabParams p;
  if (P.has("alpha") || P.has("beta")) {
    p.k_max = k_max;
    p.alpha = P.has("alpha") ? P.rationals("alpha") : std::vector<Rational>(k_max, Rational(1));
    p.beta = P.has("beta") ? P.rationals("beta") : std::vector<Rational>{};
    if (p.beta.empty())
      for (int k = 1; k <= k_max; ++k) p.beta.push_back(Rational(k));
    if (!P.has("k_max") && !o.k) p.k_max = int(p.alpha.size());
  } else if (o.seed) {
    Sampler s(*o.seed);
    p = CLabParams::sample(k_max, s);
  } else {
    p = CLabParams::specialization(k_max);
  }
  p.weight = w;
  p.validate();
  return p;
}

std::vector<Json> example_c(Report& rep, const Params& P, const Options& o, Weight w) {
  const int k_max = o.k.value_or(P.integer("k_max", 3));
  CLabParams p = c_params(P, o, k_max, w);
  P.check_used();
  CLabReport r = c_lab_report(p);
  Section& head = rep.section("C");
  head.add("weight", p.weight.to_string());
  head.add("alpha", rationals_text(p.alpha), rationals_json(p.alpha));
  head.add("beta", rationals_text(p.beta), rationals_json(p.beta));
  for (const CLabTruncation& t : r.rows) {
    Section& sec = rep.section("truncation k=" + std::to_string(t.k));
    add_shape(sec, "W-", t.minus);
    add_shape(sec, "Winf", t.infty);
    add_shape(sec, "W+", t.plus);
    sec.add("continuation", exponents_to_string(t.exponents), exponents_json(t.exponents));
    sec.add("gamma", t.gamma.to_string());
    sec.add("valuation_x0", t.valuation.to_string());
    add_poly(sec, "s~(t)", t.slice);
    add_poly(sec, "f(t)", t.filtration);
    sec.add("ok", t.ok());
  }
  Section& tail = rep.section("E+ deaths");
  std::string pages, coefs;
  for (std::size_t j = 0; j < r.death_page.size(); ++j) {
    pages += (j ? " " : "") + std::to_string(r.death_page[j]);
    coefs += (j ? ", " : "") + r.zigzag_coefficients[j].to_string();
  }
  tail.add("death_page", pages.empty() ? "-" : pages, Json(r.death_page));
  tail.add("zigzag", coefs.empty() ? "-" : coefs, rationals_json(r.zigzag_coefficients));
  tail.add("ok", r.ok());
  check_ok(r.ok(), "C lab");
  return {};
}

std::vector<Json> example_tcp1(Report& rep, const Params& P, const Options& o, Weight w) {
  const int k_max = o.k.value_or(P.integer("k_max", 4));
  TCP1Params p;
  if (P.has("alpha") || P.has("beta")) {
    if (!P.has("alpha") || !P.has("beta")) throw InputError("TCP1 needs both alpha and beta");
    p.alpha = P.rationals("alpha");
    p.beta = P.rationals("beta");
    p.k_max = o.k.value_or(P.integer("k_max", int(p.alpha.size())));
  } else {
    Sampler s(o.seed.value_or(1));
    p = TCP1Params::sample(k_max, s, P.real("force_z", 0.3));
  }
  P.check_used();
  p.weight = w;
  p.validate();
  TCP1Report r = tcp1_report(p, Exec::parallel);
  Section& head = rep.section("TCP1");
  head.add("alpha", rationals_text(p.alpha), rationals_json(p.alpha));
  head.add("beta", rationals_text(p.beta), rationals_json(p.beta));
  for (const TCP1Step& s : r.steps) {
    Section& sec = rep.section("R_" + std::to_string(s.k));
    sec.add("exponents", exponents_to_string(s.exponents), exponents_json(s.exponents));
    sec.add("class", s.label.to_string());
    add_poly(sec, "s~(t)", s.slice);
    if (s.k >= 1) {
      sec.add("A B C D", s.A.to_string() + " " + s.B.to_string() + " " + s.C.to_string() + " " + s.D.to_string(),
              Json::array({s.A.to_string(), s.B.to_string(), s.C.to_string(), s.D.to_string()}));
      sec.add("B_recursion", s.B_recursion.to_string());
    }
    sec.add("valuation_x0", s.valuation.to_string());
    sec.add("ok", s.ok);
  }
  Section& tail = rep.section("summary");
  tail.add("z_then_n", r.z_then_n);
  tail.add("ok", r.ok());
  check_ok(r.ok(), "TCP1 lab");
  return {};
}

TwistedParams twisted_params(const Params& P, const Options& o, Weight w) {
  TwistedParams p;
  p.k_max = o.k.value_or(P.integer("k_max", 2));
  p.weight = w;
  p.seed = o.seed.value_or(1);
  p.p_zero = P.real("p_zero", p.p_zero);
  p.p_z_branch = P.real("p_z_branch", p.p_z_branch);
  P.check_used();
  if (p.k_max < 1) throw InputError("k_max must be >= 1");
  return p;
}

void example_twisted(Report& rep, const Params& P, const Options& o, Weight w) {
  TwistedParams p = twisted_params(P, o, w);
  TwistedReport r = twisted_report(p, o.degmin.value_or(-12), o.degmax.value_or(4));
  for (const TwistedStep& s : r.steps) {
    Section& sec = rep.section("slope " + s.slope.to_string());
    add_shape(sec, "W-", s.minus);
    sec.add("exponents", exponents_to_string(s.exponents), exponents_json(s.exponents));
    add_poly(sec, "s~(t)", s.slice);
    sec.add("class", s.label);
    sec.add("shape_ok", s.shape_ok);
  }
  Section& tail = rep.section("summary");
  tail.add("x_ok", r.x_ok);
  tail.add("dichotomy_ok", r.dichotomy_ok);
  tail.add("composite_ok", r.composite_ok);
  tail.add("ss_ok", r.ss_ok);
  check_ok(r.ok(), "twisted TCP1 lab");
}

void example_oneg1(Report& rep, const Params& P, const Options& o, Weight w) {
  const int k_max = o.k.value_or(P.integer("k_max", 4));
  ONeg1Params p;
  if (P.has("A")) {
    p.k_max = k_max;
    for (auto& step : P.list("A", '|')) {
      Params one;
      one.values["A"] = {step, P.values.at("A").line};
      auto v = one.rationals("A");
      if (v.size() != 4) throw InputError("each A step is `A11, A12, A21, A22`", P.values.at("A").line, 1);
      p.A.push_back({v[0], v[1], v[2], v[3]});
    }
    if (!P.has("k_max") && !o.k) p.k_max = int(p.A.size());
  } else {
    Sampler s(o.seed.value_or(1));
    std::vector<int> degenerate = P.has("degenerate_at") ? P.ints("degenerate_at") : std::vector<int>{};
    p = ONeg1Params::sample(k_max, s, degenerate);
  }
  P.check_used();
  p.weight = w;
  p.validate();
  ONeg1Report r = oneg1_report(p);
  for (const ONeg1Step& s : r.steps) {
    Section& sec = rep.section("ER_" + std::to_string(s.k));
    sec.add("exponents", exponents_to_string(s.exponents), exponents_json(s.exponents));
    sec.add("expected_m", s.expected_m);
    add_poly(sec, "s~(t)", s.slice);
    add_poly(sec, "f(t)", s.filtration);
    sec.add("ok", s.ok);
  }
  Section& tail = rep.section("limit");
  add_limit(tail, r.limit);
  tail.add("limit_ok", r.limit_ok);
  check_ok(r.ok(), "O(-1) lab");
}

void example_monotone(Report& rep, const Params& P, const Options& o) {
  const int t = P.integer("t", 2), s = P.integer("s", 1);
  const int k_max = o.k.value_or(P.integer("k_max", 6));
  const int fail_at = P.integer("fail_at", -1), kernel_dim = P.integer("kernel_dim", 1);
  P.check_used();
  if (t < 0 || s < 0 || t + s < 1) throw InputError("monotone needs t, s >= 0 with t + s >= 1");
  MonotoneReport r = monotone_structure(t, s, k_max, monotone_sampler(t, s, o.seed.value_or(1)), fail_at, kernel_dim);
  Section& sec = rep.section("monotone t=" + std::to_string(t) + " s=" + std::to_string(s));
  add_limit(sec, r.limit);
  sec.add("expected", r.expected);
  sec.add("shape_ok", r.shape_ok);
  sec.add("factors_ok", r.factors_ok);
  if (fail_at >= 0) sec.add("kernel_in_s_block", r.kernel_in_s_block);
  check_ok(r.ok(), "monotone lab");
}

void cmd_example(Report& rep, const Options& o) {
  ExampleId id = parse_example_id(o.example);
  Params P = o.params.empty() ? Params{} : Params::parse(read_file(o.params));
  Weight w = parse_weight(o.weight);
  switch (id) {
    case ExampleId::c_plane: example_c(rep, P, o, w); break;
    case ExampleId::tcp1: example_tcp1(rep, P, o, w); break;
    case ExampleId::tcp1_twisted: example_twisted(rep, P, o, w); break;
    case ExampleId::oneg1: example_oneg1(rep, P, o, w); break;
    case ExampleId::monotone: example_monotone(rep, P, o); break;
  }
}

// ---------------------------------------------------------------------------
// ss

template <class F>
void cmd_ss_doc(Report& rep, const Document<F>& doc, const Options& o) {
  int n = 0;
  for (const auto& b : doc.blocks) {
    auto* cb = std::get_if<ComplexBlock<F>>(&b);
    if (!cb) continue;
    const EqChainComplex<F>& C = cb->complex;
    std::string title = block_title<F>("complex", ++n, cb->line) + " " + C.name;
    Section& sec = rep.section(title);
    in_block(title, [&] {
      int lo = 0, hi = 0;
      for (std::size_t i = 0; i < C.gens.size(); ++i) {
        lo = i ? std::min(lo, C.gens[i].degree) : C.gens[i].degree;
        hi = i ? std::max(hi, C.gens[i].degree) : C.gens[i].degree;
      }
      lo = o.degmin.value_or(lo - 2);
      hi = o.degmax.value_or(hi + 2);
      if (lo > hi) throw InputError("--degmin exceeds --degmax");
      UAdicReport r = u_adic_pages(C, o.page, lo, hi);
      std::map<int, std::vector<const SSPageCell*>> by_page;
      for (auto& c : r.cells) by_page[c.page].push_back(&c);
      for (int page = 0; page <= o.page; ++page) {
        std::ostringstream os;
        Json cells = Json::array();
        for (auto* c : by_page[page]) {
          if (!cells.empty()) os << "\n";
          os << "p=" << c->p << " deg=" << c->degree << " dim=" << c->dim;
          cells.push_back(Json{{"p", c->p}, {"degree", c->degree}, {"dim", c->dim}});
        }
        sec.add("E_" + std::to_string(page), cells.empty() ? "0" : os.str(), cells);
      }
      sec.add("ord_zero", r.ord_zero);
      sec.add("plus_zero", r.plus_zero);
      sec.add("vanishing_consistent", r.vanishing_consistent);
      sec.add("converges", r.converges);
      if (!r.vanishing_consistent) throw InvariantError("ord W = 0 and W+ = 0 disagree");
    });
  }
  if (!n) throw InputError("ss needs a complex block (or --example)");
}

void slope_tables(Report& rep, const SlopeComplex<Rational>& C, const Weight& w, const Options& o, int lo,
                  int hi) {
  SlopeSS ss = slope_ss(C, w, o.page, lo, hi);
  Section& head = rep.section("slope spectral sequence");
  std::string cols;
  Json jc = Json::array();
  for (auto& c : ss.columns) {
    cols += (cols.empty() ? "" : " ") + c.to_string();
    jc.push_back(c.to_string());
  }
  head.add("columns", cols, jc);
  head.add("weight", w.to_string());
  head.add("free", ss.free);
  head.add("infty_higher_vanish", ss.infty_higher_vanish);
  head.add("minus_higher_torsion", ss.minus_higher_torsion);
  for (const std::string& name : selected_models(o.model)) {
    if (name == "ord") continue;
    Model m = name == "minus" ? Model::minus : name == "infty" ? Model::infty : Model::plus;
    Section& sec = rep.section(std::string("model ") + model_name(m));
    for (int page = 0; page <= o.page; ++page) {
      std::string t = ss.table(m, page);
      Json rows = Json::array();
      for (int d = hi; d >= lo; --d) {
        Json row = Json::array();
        for (std::size_t c = 0; c < ss.columns.size(); ++c) row.push_back(ss.dim(m, page, int(c), d));
        rows.push_back(Json{{"degree", d}, {"dims", row}});
      }
      sec.add("E_" + std::to_string(page), t.substr(t.find('\n') + 1), rows);
    }
  }
}

void cmd_ss_example(Report& rep, const Options& o) {
  ExampleId id = parse_example_id(o.example);
  Params P = o.params.empty() ? Params{} : Params::parse(read_file(o.params));
  Weight w = parse_weight(o.weight);
  if (id == ExampleId::c_plane) {
    CLabParams p = c_params(P, o, o.k.value_or(P.integer("k_max", 3)), w);
    P.check_used();
    slope_tables(rep, build_C(p), w, o, o.degmin.value_or(-2 * p.k_max - 2), o.degmax.value_or(2));
  } else if (id == ExampleId::tcp1_twisted) {
    TwistedParams p = twisted_params(P, o, w);
    slope_tables(rep, build_twisted(p), w, o, o.degmin.value_or(-12), o.degmax.value_or(4));
  } else {
    throw InputError("ss --example supports C and TCP1_TWISTED");
  }
}

// ---------------------------------------------------------------------------

template <class F>
void dispatch_doc(Report& rep, const std::string& cmd, const Document<F>& doc, const Options& o) {
  if (cmd == "snf") cmd_snf(rep, doc, o);
  else if (cmd == "homology") cmd_homology(rep, doc, o);
  else if (cmd == "filtration") cmd_filtration(rep, doc, o);
  else if (cmd == "limit") cmd_limit(rep, doc, o);
  else cmd_ss_doc(rep, doc, o);
}

void add_common(CLI::App* app, Options& o) {
  app->add_flag("--json", o.json, "structured output");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--window", o.window, "stabilization window");
  app->add_option("--degmin", o.degmin, "lowest degree of the window");
  app->add_option("--degmax", o.degmax, "highest degree of the window");
  app->add_option("--model", o.model, "minus|infty|plus|ord|all")
      ->check(CLI::IsMember({"minus", "infty", "plus", "ord", "all"}));
  app->add_option("--page", o.page, "last spectral sequence page")->check(CLI::NonNegativeNumber);
  app->add_option("--k", o.k, "number of steps / truncation level")->check(CLI::NonNegativeNumber);
  app->add_option("--weight", o.weight, "weight a,b");
  app->add_option("--params", o.params, "example parameter file");
}

}  // namespace

Result run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Modules over K[[u]]: Smith forms, equivariant homology, filtrations, limits", "dvrkit"};
  app.require_subcommand(1);
  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {{"snf", "invariant factors of every matrix"},
                      {"homology", "W-, Winf, W+ and ordinary cohomology of every complex"},
                      {"filtration", "induced filtration, slice polynomials and Young diagrams"},
                      {"limit", "composite factors and the limit shape of a directed system"},
                      {"example", "run one of the built-in example labs"},
                      {"ss", "u-adic or slope spectral sequence pages"}};
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    if (std::string(c.name) == "example") {
      sub->add_option("name", o.example, "C | TCP1 | TCP1_TWISTED | ONEG1 | MONOTONE")->required();
    } else if (std::string(c.name) == "ss") {
      sub->add_option("input", o.input, "input document");
      sub->add_option("--example", o.example, "C | TCP1_TWISTED");
    } else {
      sub->add_option("input", o.input, "input document")->required();
    }
  }

  Result res;
  std::ostringstream out, err;
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    res.exit_code = app.exit(e, out, err) == 0 ? 0 : 1;
    res.out = out.str();
    res.err = err.str();
    return res;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Report rep;
  rep.command = cmd;
  try {
    if (cmd == "example") {
      cmd_example(rep, o);
    } else if (cmd == "ss" && o.input.empty()) {
      if (o.example.empty()) throw InputError("ss needs an input document or --example");
      cmd_ss_example(rep, o);
    } else {
      AnyDocument doc;
      try {
        doc = parse_document(read_file(o.input));
      } catch (const InputError& e) {
        throw InputError(o.input + ": " + e.what());
      }
      std::visit([&](const auto& d) { dispatch_doc(rep, cmd, d, o); }, doc);
    }
    res.out = o.json ? rep.json() : rep.text();
  } catch (const InputError& e) {
    res.exit_code = 1;
    res.err = "error: " + std::string(e.what()) + "\n";
  } catch (const ConfigError& e) {
    res.exit_code = 1;
    res.err = "error: " + std::string(e.what()) + "\n";
  } catch (const DomainError& e) {
    res.exit_code = 1;
    res.err = "error: " + std::string(e.what()) + "\n";
  } catch (const PrecisionError& e) {
    res.exit_code = 2;
    res.err = "insufficient precision: " + std::string(e.what()) + "\n";
  } catch (const std::exception& e) {
    res.exit_code = 3;
    res.err = "internal invariant failed: " + std::string(e.what()) + "\n";
    res.out = o.json ? rep.json() : rep.text();
  }
  return res;
}

}  // namespace dvr::cli
