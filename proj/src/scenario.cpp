#include "abaudit/scenario.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "abaudit/errors.hpp"
#include "abaudit/parser.hpp"

namespace abaudit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Splits on commas at bracket depth zero.
std::vector<std::string_view> split_top(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  std::string_view last = trim(s.substr(start));
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

std::string_view unbracket(std::string_view s, const char* what) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ValidationError(std::string(what) + ": expected a [...] list");
  return trim(s.substr(1, s.size() - 2));
}

Rat parse_rat(std::string_view s, const char* what) {
  static const SymbolTable empty;
  try {
    RootVal v = eval_point(parse_expr(&empty, s), {});
    if (v.q != 0) throw ValidationError("irrational value");
    return v.p;
  } catch (const Error&) {
    throw ValidationError(std::string(what) + ": not a rational constant: '" +
                          std::string(s) + "'");
  }
}

std::uint64_t parse_uint(std::string_view s, const char* what) {
  if (s.empty()) throw ValidationError(std::string(what) + ": empty value");
  std::uint64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ValidationError(std::string(what) + ": not a whole number: '" +
                            std::string(s) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("scenario line " + std::to_string(lineno) +
                            ": expected key = value");
    std::string key{trim(line.substr(0, eq))};
    std::string_view val = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ValidationError("scenario line " + std::to_string(lineno) +
                            ": duplicate key '" + key + "'");

    if (key == "dim") {
      sc.dim = static_cast<std::size_t>(parse_uint(val, "dim"));
    } else if (key == "metric") {
      for (std::string_view row : split_top(unbracket(val, "metric"))) {
        std::vector<std::string> entries;
        for (std::string_view e : split_top(unbracket(row, "metric row")))
          entries.emplace_back(e);
        sc.metric.push_back(std::move(entries));
      }
    } else if (key == "b") {
      for (std::string_view e : split_top(unbracket(val, "b")))
        sc.b.emplace_back(e);
    } else if (key == "sigma") {
      sc.sigma = std::string(val);
    } else if (key == "eps") {
      sc.eps = parse_rat(val, "eps");
    } else if (key == "k") {
      sc.k = parse_rat(val, "k");
    } else if (key == "seed") {
      sc.seed = parse_uint(val, "seed");
    } else if (key == "points") {
      for (std::string_view pt : split_top(unbracket(val, "points"))) {
        std::vector<Rat> coords;
        for (std::string_view c : split_top(unbracket(pt, "point")))
          coords.push_back(parse_rat(c, "point coordinate"));
        sc.points.push_back(std::move(coords));
      }
    } else {
      throw ValidationError("scenario line " + std::to_string(lineno) +
                            ": unknown key '" + key + "'");
    }
  }

  if (sc.dim < 2 || sc.dim > 4)
    throw ValidationError("scenario: dim must be between 2 and 4");
  if (sc.metric.empty()) throw ValidationError("scenario: metric is required");
  if (sc.b.empty()) throw ValidationError("scenario: b is required");
  if (sc.metric.size() != sc.dim)
    throw ValidationError("scenario: metric has wrong row count");
  for (const auto& row : sc.metric)
    if (row.size() != sc.dim)
      throw ValidationError("scenario: metric has a ragged row");
  if (sc.b.size() != sc.dim)
    throw ValidationError("scenario: b has wrong length");
  for (const auto& pt : sc.points)
    if (pt.size() != sc.dim)
      throw ValidationError("scenario: sample point has wrong length");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

const std::string& default_scenario_text() {
  static const std::string text =
      "# Bundled fallback scenario: curved two-dimensional chart with a\n"
      "# varying scale function and the mixed quadratic parameter pair.\n"
      "dim    = 2\n"
      "metric = [[1, 0], [0, 1 + x1^2]]\n"
      "b      = [x2, 1]\n"
      "sigma  = x1 * x2\n"
      "eps    = 1\n"
      "k      = 1\n"
      "seed   = 1729\n"
      "points = [[1, 2], [1/2, -1], [2, 1/3]]\n";
  return text;
}

Model build_model(const Scenario& sc) {
  Model m;
  m.ch = make_chart(sc.dim);
  const SymbolTable* tab = m.ch.tab.get();

  ExprMat a(sc.dim, ExprVec(sc.dim, m.ch.zero()));
  for (std::size_t i = 0; i < sc.dim; ++i)
    for (std::size_t j = 0; j < sc.dim; ++j)
      a[i][j] = parse_expr(tab, sc.metric[i][j]);
  m.g = metric_data(m.ch, std::move(a));
  m.gamma = christoffel(m.ch, m.g);

  ExprVec b(sc.dim, m.ch.zero());
  for (std::size_t i = 0; i < sc.dim; ++i) b[i] = parse_expr(tab, sc.b[i]);
  m.bd = beta_data(m.ch, m.g, m.gamma, std::move(b));

  m.sd = scale_data(m.ch, m.g, m.bd, parse_expr(tab, sc.sigma));
  m.E = install_unit(m.ch, m.sd);
  m.unit = Expr::sym(tab, m.E);

  m.ch.tab->set_root("alpha", m.g.alpha2.even());
  m.alpha = Expr::root(tab);
  m.eps = sc.eps;
  m.k = sc.k;
  m.seed = sc.seed;

  // Sample points must keep the metric invertible and the package
  // denominator alive once the fiber stays generic.
  AtomTable at;
  LPieces p = family_pieces(at, Expr::constant(&at.tab, sc.eps),
                            Expr::constant(&at.tab, sc.k));
  Frame f;
  f.ch = &m.ch;
  f.alpha = m.alpha;
  f.bd = &m.bd;
  f.lp = &p;
  f.sigma_fn = m.sd.sigma;
  f.sigma0 = m.sd.sigma0;
  f.rho = m.sd.rho;
  f.sigmai = m.sd.sigma_up;
  f.unit = m.unit;
  f.eps = sc.eps;
  f.k = sc.k;
  m.omega = on_chart(at, f, p.Omega);

  for (std::size_t idx = 0; idx < sc.points.size(); ++idx) {
    std::map<SymId, Rat> pt;
    for (std::size_t j = 0; j < sc.dim; ++j) pt[m.ch.x[j]] = sc.points[idx][j];

    SubstMap pin;
    pin.target = tab;
    for (const auto& [s, v] : pt) pin.bind[s] = Expr::constant(tab, v);
    try {
      if (substitute(m.g.det, pin).is_zero())
        throw ValidationError("sample point " + std::to_string(idx + 1) +
                              ": metric degenerates");
      if (substitute(m.omega, pin).is_zero())
        throw ValidationError("sample point " + std::to_string(idx + 1) +
                              ": package denominator vanishes identically");
    } catch (const DivisionByZero&) {
      throw ValidationError("sample point " + std::to_string(idx + 1) +
                            ": geometry is singular there");
    }
    m.xpoints.push_back(std::move(pt));
  }
  return m;
}

}  // namespace abaudit
