#include "mahler/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "mahler/errors.hpp"
#include "mahler/experiments.hpp"
#include "mahler/laurent.hpp"
#include "mahler/measures.hpp"
#include "mahler/torushom.hpp"

namespace mahler {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kComputation = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json json_real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

Json json_int(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "--config path" is replaced by the flags it lists. A key is ignored when
// the same flag already appears on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;

  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::istringstream in(read_file(*path));
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(*path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::vector<LaurentPoly> parse_polys(const std::vector<std::string>& texts, std::size_t min_vars = 1) {
  std::vector<std::string> src;
  std::size_t n = min_vars;
  for (const auto& t : texts) {
    src.push_back(!t.empty() && t[0] == '@' ? trim(read_file(t.substr(1))) : t);
    n = std::max(n, parse_poly(src.back()).nvars());
  }
  std::vector<LaurentPoly> polys;
  for (const auto& s : src) polys.push_back(parse_poly(s, n));
  return polys;
}

MeasureKind make_kind(const std::string& name, std::size_t count) {
  if (name == "classic") {
    if (count != 1) throw UsageError("--kind classic takes exactly one --poly");
    return MeasureKind::classic();
  }
  if (count == 0) throw UsageError("at least one --poly is required");
  return name == "max" ? MeasureKind::max(count) : MeasureKind::prod(count);
}

Method make_method(const std::string& name) {
  if (name == "jensen") return Method::JensenExact;
  if (name == "circle") return Method::CircleQuadrature;
  if (name == "qmc") return Method::TorusQMC;
  return Method::BoydLawtonLimit;
}

Json detail_json(const Detail& d) {
  Json j = Json::object();
  for (const auto& [k, v] : d) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>)
            j[k] = json_real(x);
          else
            j[k] = x;
        },
        v);
  }
  return j;
}

Json estimate_json(const MeasureEstimate& e) {
  Json j;
  j["value"] = json_real(e.value);
  j["error"] = json_real(e.error_estimate);
  j["method"] = method_name(e.method);
  j["detail"] = detail_json(e.detail);
  return j;
}

// Flags shared by measure and converge.
struct NumericFlags {
  std::uint64_t samples = QmcConfig{}.samples;
  std::uint64_t shifts = QmcConfig{}.shifts;
  std::uint64_t seed = QmcConfig{}.seed;
  double clip = QmcConfig{}.clip;
  double tol = 0.0;
  std::int64_t b = MeasureParams{}.b;
  CLI::Option* tol_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--samples", samples, "QMC samples per shift")->capture_default_str();
    app->add_option("--shifts", shifts, "QMC random shifts")->capture_default_str();
    app->add_option("--seed", seed, "QMC seed")->capture_default_str();
    app->add_option("--clip", clip, "floor for |P| inside the logarithm")->capture_default_str();
    app->add_option("--b", b, "base for the boyd-lawton method")->capture_default_str();
    tol_opt = app->add_option("--tol", tol, "root tolerance (jensen) or panel tolerance (circle)");
  }

  MeasureParams params() const {
    MeasureParams p;
    p.qmc.samples = samples;
    p.qmc.shifts = shifts;
    p.qmc.seed = seed;
    p.qmc.clip = clip;
    p.b = b;
    if (tol_opt && *tol_opt) {
      if (!(tol > 0)) throw UsageError("--tol must be positive");
      p.root_tol = p.panel_tol = tol;
    }
    try {
      p.qmc.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
    f.close();
    if (!f) {
      std::filesystem::remove(tmp);
      throw UsageError("cannot write " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw UsageError("cannot write " + path + ": " + ec.message());
  }
}

std::string csv_real(std::optional<double> x) { return x ? format_real(*x) : std::string(); }

std::string verify_table(const std::vector<CheckResult>& rows) {
  std::ostringstream s;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-12s %-16s %-16s %-10s %s\n", "case", "method", "computed", "reference",
                "tolerance", "result");
  s << line;
  std::size_t passed = 0;
  for (const auto& r : rows) {
    passed += r.pass;
    std::snprintf(line, sizeof line, "%-28s %-12s %-16s %-16s %-10s %s", r.name.c_str(), r.method.c_str(),
                  format_real(r.computed).c_str(), format_real(r.reference).c_str(),
                  format_real(r.tolerance).c_str(), r.pass ? "PASS" : "FAIL");
    s << line;
    if (!r.note.empty()) s << "  (" << r.note << ")";
    s << '\n';
  }
  s << passed << "/" << rows.size() << " passed\n";
  return s.str();
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, round12(x));
  return std::string(buf, res.ptr);
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app("Mahler measures, Boyd heights and limit experiments", "mahler");
  app.require_subcommand(1);
  std::string output;
  app.add_option("-o,--output", output, "write the result to this file instead of stdout");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "compute a Mahler measure");
  std::string kind_name = "classic", method_str;
  std::vector<std::string> poly_texts;
  NumericFlags mflags;
  measure_cmd->add_option("--kind", kind_name)->check(CLI::IsMember({"classic", "max", "prod"}));
  measure_cmd->add_option("--poly", poly_texts, "polynomial text or @file; repeat for max/prod")->required();
  measure_cmd->add_option("--method", method_str)->check(CLI::IsMember({"jensen", "circle", "qmc", "boyd-lawton"}));
  measure_cmd->add_option("-o,--output", output);
  mflags.attach(measure_cmd);

  // height
  auto* height_cmd = app.add_subcommand("height", "Boyd height of an integer matrix");
  std::string matrix_text;
  height_cmd->add_option("--matrix", matrix_text, "rows separated by ';', entries by ','")->required();
  height_cmd->add_option("-o,--output", output);

  // substitute
  auto* subst_cmd = app.add_subcommand("substitute", "power substitution P^(A)");
  std::string subst_poly;
  subst_cmd->add_option("--poly", subst_poly)->required();
  subst_cmd->add_option("--matrix", matrix_text)->required();
  subst_cmd->add_option("-o,--output", output);

  // converge
  auto* conv_cmd = app.add_subcommand("converge", "limit experiment over the base-b family");
  std::string conv_kind = "classic", family = "vector", reference_text, format = "csv";
  std::vector<std::string> conv_polys;
  std::size_t m = 2;
  std::int64_t b_start = 2, b_end = 20, b_step = 1, b_factor = 0;
  NumericFlags cflags;
  conv_cmd->add_option("--kind", conv_kind)->check(CLI::IsMember({"classic", "max", "prod"}));
  conv_cmd->add_option("--poly", conv_polys)->required();
  conv_cmd->add_option("--family", family)->check(CLI::IsMember({"vector", "matrix"}));
  conv_cmd->add_option("--m", m, "target torus dimension of the matrix family")->capture_default_str();
  conv_cmd->add_option("--b-start", b_start)->capture_default_str();
  conv_cmd->add_option("--b-end", b_end)->capture_default_str();
  conv_cmd->add_option("--b-step", b_step)->capture_default_str();
  conv_cmd->add_option("--b-factor", b_factor, "geometric schedule: multiply b by this instead of adding --b-step");
  conv_cmd->add_option("--reference", reference_text, "real number or 'auto'");
  conv_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  conv_cmd->add_option("-o,--output", output);
  cflags.attach(conv_cmd);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the identity and property suites");
  bool fast = false, full = false;
  std::string verify_format = "text";
  auto* fast_opt = verify_cmd->add_flag("--fast", fast, "1-D identities and exact properties (default)");
  verify_cmd->add_flag("--full", full, "also the QMC identities on T^3 and T^4")->excludes(fast_opt);
  verify_cmd->add_option("--format", verify_format)->check(CLI::IsMember({"text", "json"}));
  verify_cmd->add_option("-o,--output", output);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  // Validation errors thrown before any computation map to exit 2;
  // everything raised by the library afterwards is a computation error.
  bool computing = false;
  try {
    if (*measure_cmd) {
      std::vector<LaurentPoly> polys = parse_polys(poly_texts);
      MeasureKind kind = make_kind(kind_name, polys.size());
      MeasureParams params = mflags.params();
      Method method = method_str.empty() ? default_method(kind, polys.front().nvars()) : make_method(method_str);
      computing = true;
      MeasureEstimate est = measure(kind, polys, method, params);
      write_output(estimate_json(est).dump() + "\n", output, out);
      return kOk;
    }
    if (*height_cmd) {
      TorusHom a = parse_matrix(matrix_text);
      computing = true;
      BoydHeight h = boyd_height(a);
      Json j;
      if (h.is_infinite()) {
        j["height"] = "infinite";
        j["witness"] = nullptr;
      } else {
        j["height"] = json_int(h.value());
        Json w = Json::array();
        for (const auto& x : *h.witness()) w.push_back(json_int(x));
        j["witness"] = w;
      }
      write_output(j.dump() + "\n", output, out);
      return kOk;
    }
    if (*subst_cmd) {
      TorusHom a = parse_matrix(matrix_text);
      LaurentPoly p = parse_polys({subst_poly}, a.rows()).front();
      if (p.nvars() != a.rows())
        throw DimensionError("polynomial has " + std::to_string(p.nvars()) + " variables but the matrix has " +
                             std::to_string(a.rows()) + " rows");
      computing = true;
      write_output(format_poly(substitute(p, a)) + "\n", output, out);
      return kOk;
    }
    if (*conv_cmd) {
      ExperimentSpec spec;
      spec.polys = parse_polys(conv_polys);
      spec.kind = make_kind(conv_kind, spec.polys.size());
      spec.params = cflags.params();
      if (family == "matrix") {
        if (m < 2) throw UsageError("--m must be at least 2 for the matrix family");
        spec.family = Family::matrix(m);
      }
      if (b_start < 1) throw UsageError("--b-start must be positive");
      if (b_start > b_end) throw UsageError("--b-start is larger than --b-end");
      if (b_factor != 0) {
        if (b_factor < 2) throw UsageError("--b-factor must be at least 2");
        for (std::int64_t b = b_start; b <= b_end; b *= b_factor) spec.b_schedule.push_back(b);
      } else {
        if (b_step < 1) throw UsageError("--b-step must be positive");
        for (std::int64_t b = b_start; b <= b_end; b += b_step) spec.b_schedule.push_back(b);
      }
      bool auto_reference = reference_text == "auto";
      if (!reference_text.empty() && !auto_reference) {
        std::size_t used = 0;
        double r = 0;
        try {
          r = std::stod(reference_text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != reference_text.size() || reference_text.empty())
          throw UsageError("--reference must be a real number or 'auto'");
        spec.reference = r;
      }
      computing = true;
      if (auto_reference) {
        QmcConfig cfg = spec.params.qmc;
        cfg.samples *= 4;
        spec.reference = torus_qmc(spec.kind, spec.polys, cfg).value;
      }
      auto records = run_convergence(spec);

      std::ostringstream s;
      if (format == "csv") {
        s << "b,mu,m_vars,value,error,reference,deviation\n";
        for (const auto& r : records) {
          s << r.b << ',' << r.mu.to_string() << ',' << r.target_vars << ',';
          if (r.skipped())
            s << ",skipped,";
          else
            s << format_real(r.estimate->value) << ',' << format_real(r.estimate->error_estimate) << ',';
          s << csv_real(r.reference) << ',' << csv_real(r.deviation) << '\n';
        }
      } else {
        Json j;
        j["kind"] = spec.kind.name();
        j["family"] = family;
        j["reference"] = spec.reference ? json_real(*spec.reference) : Json(nullptr);
        Json rows = Json::array();
        for (const auto& r : records) {
          Json row;
          row["b"] = r.b;
          row["mu"] = json_int(r.mu.value());
          row["m_vars"] = r.target_vars;
          row["skipped"] = r.skipped();
          row["value"] = r.skipped() ? Json(nullptr) : json_real(r.estimate->value);
          row["error"] = r.skipped() ? Json(nullptr) : json_real(r.estimate->error_estimate);
          row["method"] = r.skipped() ? Json(nullptr) : Json(method_name(r.estimate->method));
          row["deviation"] = r.deviation ? json_real(*r.deviation) : Json(nullptr);
          rows.push_back(row);
        }
        j["records"] = rows;
        s << j.dump() << '\n';
      }
      write_output(s.str(), output, out);
      return kOk;
    }
    if (*verify_cmd) {
      computing = true;
      Report report = identity_suite(full);
      Report exact = exact_property_suite();
      report.results.insert(report.results.end(), exact.results.begin(), exact.results.end());
      std::string text;
      if (verify_format == "json") {
        Json j;
        j["suite"] = full ? "full" : "fast";
        j["pass"] = report.all_pass();
        Json cases = Json::array();
        for (const auto& r : report.results) {
          Json c;
          c["name"] = r.name;
          c["method"] = r.method;
          c["computed"] = json_real(r.computed);
          c["reference"] = json_real(r.reference);
          c["tolerance"] = json_real(r.tolerance);
          c["error_estimate"] = json_real(r.error_estimate);
          c["pass"] = r.pass;
          if (!r.note.empty()) c["note"] = r.note;
          cases.push_back(c);
        }
        j["cases"] = cases;
        text = j.dump(2) + "\n";
      } else {
        text = verify_table(report.results);
      }
      write_output(text, output, out);
      return report.all_pass() ? kOk : kVerifyFailed;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return computing ? kComputation : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
  return kUsage;
}

}  // namespace mahler
