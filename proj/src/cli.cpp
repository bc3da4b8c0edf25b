#include "skewform/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "skewform/errors.hpp"
#include "skewform/form_parser.hpp"
#include "skewform/oracle.hpp"

namespace skewform::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string command;
  std::string mu_file;
  std::optional<double> tol;
  bool permutations = false;
  bool sum_of_products = false;
  bool json_output = false;
  std::uint64_t seed = 42;
  std::size_t cases = 200;
  std::string form;
  std::string form_file;
};

json scalar_json(Scalar c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

Scalar json_scalar(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError(where + ": expected a number or a [re, im] pair");
}

// Human text for a number stored in the report, so both outputs carry the
// same values.
std::string value_text(const json& j) {
  if (j.is_null()) return "none";
  if (j.is_number()) return format_number(j.get<double>());
  if (j.is_array() && j.size() == 2) return format_scalar({j[0].get<double>(), j[1].get<double>()});
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(std::string("cannot read ") + what + " '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json mu_json(const MuMatrix& mu, double tol) {
  json rows = json::array();
  for (std::size_t i = 0; i < mu.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < mu.n(); ++j) row.push_back(scalar_json(mu(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"n", mu.n()}, {"mu", std::move(rows)}, {"tolerance", tol}};
}

json linear_json(const LinearForm& l) {
  json c = json::array();
  for (const auto& x : l.coeffs()) c.push_back(scalar_json(x));
  return c;
}

const char* kind_of(const Factorization& f) {
  if (f.is_zero()) return "zero";
  if (f.is_square()) return "square";
  if (f.is_product()) return "product";
  return "sum_of_products";
}

json witness_json(const Factorization& f) {
  json factors = json::array();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Square>) {
          factors.push_back(linear_json(s.l));
        } else if constexpr (std::is_same_v<T, Product>) {
          factors.push_back(linear_json(s.l1));
          factors.push_back(linear_json(s.l2));
        } else if constexpr (std::is_same_v<T, SumOfProducts>) {
          factors.push_back(linear_json(s.l1));
          factors.push_back(linear_json(s.l2));
          factors.push_back(linear_json(s.l3));
        }
      },
      f.shape);
  return {{"kind", kind_of(f)}, {"text", print(f)}, {"factors", std::move(factors)}, {"residual", f.residual}};
}

Factorization square_witness(const QuadraticForm& q, const LinearForm& l) {
  Factorization f{q.mu(), Square{l}, std::nullopt, std::nullopt, 0.0};
  f.residual = scaled_residual(q, expand(f));
  return f;
}

std::string sign_text(SignPair s) {
  return std::string("(") + (s.x == Sign::Plus ? "+" : "-") + "," + (s.y == Sign::Plus ? "+" : "-") + ")";
}

json diagnostics_json(const QuadraticForm& q, Tolerance tol) {
  json d = json::object();
  const auto n = q.mu().n();
  if (n != 2 && n != 3) return d;
  const auto m = form_to_matrix(q);
  if (n == 2) {
    d["D"] = scalar_json(mu_det_2(m));
    return d;
  }
  const auto minors = mu_minors_3(m);
  for (std::size_t k = 0; k < 6; ++k) d["D" + std::to_string(k + 1)] = scalar_json(minors[k]);
  d["D7"] = scalar_json(mu_det_D7(m));
  json d8 = json::array();
  double min_abs = INFINITY;
  for (const auto& v : mu_det_D8_all_signs(m, tol)) {
    d8.push_back({{"signs", sign_text(v.radicals.signs)},
                  {"value", scalar_json(v.value)},
                  {"X", scalar_json(v.radicals.x)},
                  {"Y", scalar_json(v.radicals.y)}});
    min_abs = std::min(min_abs, std::abs(v.value));
  }
  d["D8"] = std::move(d8);
  d["min_abs_D8"] = min_abs;
  d["sextic"] = scalar_json(sextic(m));
  // a = 0 after normalization decides by D7, otherwise by D8.
  d["criterion"] = *mu_rank_3(q, tol).diagnostics.a_is_one ? "D8" : "D7";
  return d;
}

std::string perm_text(const std::vector<std::size_t>& perm) {
  std::string s;
  for (auto p : perm) s += (s.empty() ? "" : " ") + std::string("z") + std::to_string(p + 1);
  return s;
}

struct Context {
  MuMatrix mu = MuMatrix::identity(2);
  Tolerance tol;
};

Context make_context(const Options& o, const std::string& form_text) {
  Context ctx;
  std::optional<double> file_tol;
  if (!o.mu_file.empty()) {
    auto cfg = parse_mu_config(read_file(o.mu_file, "mu file"));
    ctx.mu = cfg.mu;
    file_tol = cfg.tolerance;
  } else {
    ctx.mu = MuMatrix::identity(std::max<std::size_t>(2, max_generator_index(form_text)));
  }
  ctx.tol.tol = o.tol.value_or(file_tol.value_or(kDefaultTolerance));
  if (!(ctx.tol.tol > 0.0) || !std::isfinite(ctx.tol.tol)) throw InputError("tolerance must be a positive number");
  return ctx;
}

std::string form_text_of(const Options& o) {
  if (!o.form_file.empty()) {
    if (!o.form.empty()) throw InputError("give either FORM or --form-file, not both");
    return read_file(o.form_file, "form file");
  }
  if (o.form.empty()) throw InputError("missing FORM argument");
  return o.form;
}

json base_report(const std::string& command) {
  return {{"command", command},
          {"mu", nullptr},
          {"form", nullptr},
          {"diagnostics", json::object()},
          {"witnesses", json::array()},
          {"residuals", json::array()}};
}

// Rounding noise such as 1.9999999999999998 is snapped to the 12-digit
// decimal when it is within a few ulps of it, and dust to zero. Genuine
// digits are untouched.
double tidy(double x, double scale) {
  if (std::abs(x) <= 1e-14 * scale) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double y = std::strtod(buf, nullptr);
  return std::abs(x - y) <= 1e-14 * scale ? y : x;
}

LinearForm tidy(const LinearForm& l) {
  double scale = 0.0;
  for (const auto& c : l.coeffs()) scale = std::max(scale, std::abs(c));
  std::vector<Scalar> out;
  for (const auto& c : l.coeffs()) out.emplace_back(tidy(c.real(), scale), tidy(c.imag(), scale));
  return LinearForm(l.mu(), std::move(out));
}

void add_witness(json& r, const QuadraticForm& q, Factorization f) {
  std::visit(
      [](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Square>) {
          s.l = tidy(s.l);
        } else if constexpr (std::is_same_v<T, Product>) {
          s.l1 = tidy(s.l1);
          s.l2 = tidy(s.l2);
        } else if constexpr (std::is_same_v<T, SumOfProducts>) {
          s.l1 = tidy(s.l1);
          s.l2 = tidy(s.l2);
          s.l3 = tidy(s.l3);
        }
      },
      f.shape);
  f.residual = scaled_residual(q, expand(f));
  r["witnesses"].push_back(witness_json(f));
  r["residuals"].push_back(f.residual);
}

json cmd_rank(const Options& o) {
  const auto text = form_text_of(o);
  const auto ctx = make_context(o, text);
  const auto q = parse_quadratic(text, ctx.mu, ctx.tol);
  json r = base_report("rank");
  r["mu"] = mu_json(ctx.mu, ctx.tol.tol);
  r["form"] = print(q);
  r["diagnostics"] = diagnostics_json(q, ctx.tol);
  const auto n = ctx.mu.n();
  const auto rank = mu_rank_general(q, ctx.tol);
  r["rank"] = rank ? json(*rank) : json(nullptr);
  if (!rank) r["rank_at_least"] = 2;
  if (rank == 1) {
    const auto l = n == 2 ? square_2(q, ctx.tol) : n == 3 ? square_3(q, ctx.tol) : square_general(q, ctx.tol);
    if (l) add_witness(r, q, square_witness(q, *l));
  } else if (rank == 2) {
    if (n == 2) {
      add_witness(r, q, factor_2(q, ctx.tol).front());
    } else if (auto f = factor_3(q, ctx.tol)) {
      add_witness(r, q, *f);
    }
  }
  if (o.permutations) {
    if (n > 3) throw InputError("--permutations needs n <= 3");
    json perms = json::array();
    for (const auto& p : rank_under_permutations(q, ctx.tol)) perms.push_back({{"order", perm_text(p.perm)}, {"rank", p.rank}});
    r["permutations"] = std::move(perms);
  }
  return r;
}

json cmd_factor(const Options& o) {
  const auto text = form_text_of(o);
  const auto ctx = make_context(o, text);
  const auto q = parse_quadratic(text, ctx.mu, ctx.tol);
  json r = base_report("factor");
  r["mu"] = mu_json(ctx.mu, ctx.tol.tol);
  r["form"] = print(q);
  const auto n = ctx.mu.n();
  if (n == 3) {
    if (o.sum_of_products) {
      add_witness(r, q, decompose_3(q, ctx.tol));
    } else if (q.is_zero(ctx.tol)) {
      add_witness(r, q, Factorization{q.mu(), ZeroForm{}, std::nullopt, std::nullopt, 0.0});
    } else if (auto l = square_3(q, ctx.tol)) {
      add_witness(r, q, square_witness(q, *l));
    } else if (auto f = factor_3(q, ctx.tol)) {
      add_witness(r, q, *f);
    } else {
      add_witness(r, q, decompose_3(q, ctx.tol));
    }
    return r;
  }
  if (o.sum_of_products) throw InputError("--sum-of-products needs n = 3");
  if (q.is_zero(ctx.tol)) {
    add_witness(r, q, Factorization{q.mu(), ZeroForm{}, std::nullopt, std::nullopt, 0.0});
  } else if (n == 2) {
    for (const auto& f : factor_2(q, ctx.tol)) add_witness(r, q, f);
  } else if (auto l = square_general(q, ctx.tol)) {
    add_witness(r, q, square_witness(q, *l));
  }
  return r;
}

json cmd_expand(const Options& o) {
  const auto text = form_text_of(o);
  const auto ctx = make_context(o, text);
  const auto p = parse(text, ctx.mu, ctx.tol);
  json r = base_report("expand");
  r["mu"] = mu_json(ctx.mu, ctx.tol.tol);
  r["form"] = print(p);
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    const auto mono = SkewPoly(ctx.mu, {{m, 1.0}});
    terms.push_back({{"monomial", print(mono)}, {"exponents", m.exponents}, {"coeff", scalar_json(c)}});
  }
  r["terms"] = std::move(terms);
  return r;
}

json cmd_minors(const Options& o) {
  const auto text = form_text_of(o);
  const auto ctx = make_context(o, text);
  const auto q = parse_quadratic(text, ctx.mu, ctx.tol);
  if (ctx.mu.n() != 2 && ctx.mu.n() != 3) throw InputError("minors needs n = 2 or 3");
  json r = base_report("minors");
  r["mu"] = mu_json(ctx.mu, ctx.tol.tol);
  r["form"] = print(q);
  r["diagnostics"] = diagnostics_json(q, ctx.tol);
  return r;
}

json cmd_selftest(const Options& o) {
  const Tolerance tol{o.tol.value_or(kDefaultTolerance)};
  const auto s = oracle::selftest(o.seed, o.cases, tol);
  json r = base_report("selftest");
  r["seed"] = s.seed;
  r["cases"] = s.cases;
  r["tolerance"] = tol.tol;
  json props = json::array();
  for (const auto& p : s.properties) props.push_back({{"name", p.name}, {"checked", p.checked}, {"failed", p.failed}});
  r["properties"] = std::move(props);
  json failures = json::array();
  for (const auto& f : s.failures)
    failures.push_back(
        {{"seed", f.seed}, {"description", f.description}, {"residual", f.max_residual}, {"payload", f.payload}});
  r["failures"] = std::move(failures);
  r["failure_count"] = s.failure_count();
  return r;
}

// ---------------------------------------------------------------- human text

void render_mu(std::ostream& out, const json& mu) {
  const auto n = mu["n"].get<std::size_t>();
  out << "mu: n=" << n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out << " mu" << i + 1 << j + 1 << "=" << value_text(mu["mu"][i][j]);
  out << "\ntolerance: " << value_text(mu["tolerance"]) << "\n";
}

void render(std::ostream& out, const json& r) {
  out << "command: " << r["command"].get<std::string>() << "\n";
  if (!r["mu"].is_null()) render_mu(out, r["mu"]);
  if (!r["form"].is_null()) out << "form: " << r["form"].get<std::string>() << "\n";
  if (r.contains("rank")) {
    out << "rank: " << (r["rank"].is_null() ? std::string("undetermined (at least 2)") : value_text(r["rank"])) << "\n";
  }
  const auto& d = r["diagnostics"];
  for (const auto& key : {"D", "D1", "D2", "D3", "D4", "D5", "D6", "D7"})
    if (d.contains(key)) out << key << ": " << value_text(d[key]) << "\n";
  if (d.contains("D8")) {
    for (const auto& v : d["D8"])
      out << "D8" << v["signs"].get<std::string>() << ": " << value_text(v["value"]) << "  X=" << value_text(v["X"])
          << " Y=" << value_text(v["Y"]) << "\n";
    out << "min |D8|: " << value_text(d["min_abs_D8"]) << "\n";
    out << "sextic: " << value_text(d["sextic"]) << "\n";
    out << "criterion: " << value_text(d["criterion"]) << "\n";
  }
  for (const auto& w : r["witnesses"])
    out << "witness " << w["kind"].get<std::string>() << ": " << w["text"].get<std::string>()
        << "  residual=" << value_text(w["residual"]) << "\n";
  if (r.contains("permutations"))
    for (const auto& p : r["permutations"])
      out << "order " << p["order"].get<std::string>() << ": rank " << value_text(p["rank"]) << "\n";
  if (r.contains("terms"))
    for (const auto& t : r["terms"])
      out << "  " << value_text(t["coeff"]) << "  " << t["monomial"].get<std::string>() << "\n";
  if (r.contains("properties")) {
    out << "seed: " << r["seed"].get<std::uint64_t>() << "\ncases: " << r["cases"].get<std::size_t>()
        << "\ntolerance: " << value_text(r["tolerance"]) << "\n";
    for (const auto& p : r["properties"])
      out << "  " << p["name"].get<std::string>() << ": " << p["checked"].get<std::size_t>() << " checked, "
          << p["failed"].get<std::size_t>() << " failed\n";
    for (const auto& f : r["failures"])
      out << "FAIL seed=" << f["seed"].get<std::uint64_t>() << " " << f["description"].get<std::string>()
          << " residual=" << value_text(f["residual"]) << " " << f["payload"].get<std::string>() << "\n";
    out << "failures: " << r["failure_count"].get<std::size_t>() << "\n";
  }
}

}  // namespace

MuConfig parse_mu_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("mu file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("mu")) throw InputError("mu file needs an object with a \"mu\" field");
  MuConfig cfg;
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw InputError("tolerance must be a number");
    cfg.tolerance = j["tolerance"].get<double>();
  }
  std::optional<std::size_t> n;
  if (j.contains("n")) {
    if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) throw InputError("n must be a positive integer");
    n = j["n"].get<std::size_t>();
  }
  const auto& mu = j["mu"];
  const Tolerance tol{cfg.tolerance.value_or(kDefaultTolerance)};
  if (mu.is_array()) {
    const std::size_t size = mu.size();
    if (n && *n != size) throw InputError("mu has " + std::to_string(size) + " rows but n is " + std::to_string(*n));
    std::vector<Scalar> entries;
    for (std::size_t i = 0; i < size; ++i) {
      if (!mu[i].is_array() || mu[i].size() != size) throw InputError("mu must be a square matrix");
      for (std::size_t k = 0; k < size; ++k)
        entries.push_back(json_scalar(mu[i][k], "mu entry (" + std::to_string(i + 1) + ", " + std::to_string(k + 1) + ")"));
    }
    cfg.mu = MuMatrix::from_entries(size, std::move(entries), tol);
    return cfg;
  }
  if (!mu.is_object()) throw InputError("mu must be a matrix or an object of upper entries");
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> given;
  std::size_t top = 0;
  for (const auto& [key, value] : mu.items()) {
    std::size_t i = 0;
    std::size_t k = 0;
    if (key.size() != 2 || !std::isdigit(static_cast<unsigned char>(key[0])) ||
        !std::isdigit(static_cast<unsigned char>(key[1])))
      throw InputError("mu key '" + key + "' must be two digits ij with i < j");
    i = static_cast<std::size_t>(key[0] - '0');
    k = static_cast<std::size_t>(key[1] - '0');
    if (i == 0 || i >= k) throw InputError("mu key '" + key + "' must be two digits ij with 1 <= i < j");
    given.push_back({{i - 1, k - 1}, json_scalar(value, "mu entry " + key)});
    top = std::max(top, k);
  }
  const std::size_t size = n.value_or(std::max<std::size_t>(2, top));
  if (top > size) throw InputError("mu entry beyond n = " + std::to_string(size));
  std::vector<Scalar> entries(size * size, 1.0);
  for (const auto& [ij, v] : given) {
    if (v == Scalar{0.0}) throw InputError("mu entries must be nonzero");
    entries[ij.first * size + ij.second] = v;
    entries[ij.second * size + ij.first] = 1.0 / v;
  }
  cfg.mu = MuMatrix::from_entries(size, std::move(entries), tol);
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank and factorization of quadratic forms over quantum affine space", "skewform"};
  app.require_subcommand(1, 1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool takes_form) {
    sub->add_option("--tol", o.tol, "Zero-test tolerance (overrides the mu file)");
    sub->add_flag("--json", o.json_output, "Print the report as JSON");
    if (!takes_form) return;
    sub->add_option("--mu", o.mu_file, "MuConfig JSON file (default: all mu_ij = 1)");
    sub->add_option("--form-file", o.form_file, "Read FORM from a file");
    sub->add_option("form", o.form, "Form text, e.g. \"z1^2 + 6 z1 z2 + 4 z2^2\"");
  };
  auto* rank = app.add_subcommand("rank", "mu-rank with invariants and a witness");
  add_common(rank, true);
  rank->add_flag("--permutations", o.permutations, "Also report the rank under every generator order");
  auto* factor = app.add_subcommand("factor", "Factorizations with re-expansion residuals");
  add_common(factor, true);
  factor->add_flag("--sum-of-products", o.sum_of_products, "n = 3: emit the L1 L2 + L3^2 decomposition");
  add_common(app.add_subcommand("expand", "Normal form of any expression"), true);
  add_common(app.add_subcommand("minors", "Invariants D, or D1..D8 and the sextic"), true);
  auto* selftest = app.add_subcommand("selftest", "Seeded property checks of every module");
  add_common(selftest, false);
  selftest->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  selftest->add_option("--cases", o.cases, "Cases per property")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }
  o.command = app.get_subcommands().front()->get_name();

  json report;
  try {
    if (o.command == "rank") report = cmd_rank(o);
    else if (o.command == "factor") report = cmd_factor(o);
    else if (o.command == "expand") report = cmd_expand(o);
    else if (o.command == "minors") report = cmd_minors(o);
    else report = cmd_selftest(o);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationError;
  }

  for (const auto& w : report["witnesses"])
    if (w["residual"].get<double>() > std::sqrt(o.tol.value_or(kDefaultTolerance))) {
      err << "verification failed: witness " << w["text"].get<std::string>() << " has residual "
          << value_text(w["residual"]) << "\n";
      return kVerificationError;
    }

  if (o.json_output) out << report.dump(2) << "\n";
  else render(out, report);
  if (o.command == "selftest" && report["failure_count"].get<std::size_t>() != 0) return kVerificationError;
  return kSuccess;
}

}  // namespace skewform::cli
