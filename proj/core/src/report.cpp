#include "swlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "swlab/error.hpp"

namespace swlab {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::Io, "not a number: " + s);
  }
  return j.get<double>();
}

json reals(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

std::vector<double> reals_from(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(real_from(x));
  return v;
}

json optional_real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return real_from(j);
}

json params_json(const NormParams& p) {
  return {{"n", p.n}, {"p", real(p.p)}, {"p_tilde", real(p.p_tilde)}, {"alpha", real(p.alpha)}};
}

NormParams params_from(const json& j) {
  return NormParams{real_from(j.at("p")), real_from(j.at("p_tilde")), real_from(j.at("alpha")), j.at("n").get<int>()};
}

json row_json(const RatioRow& r) {
  return {{"n", r.n},
          {"p", real(r.p)},
          {"p_tilde", real(r.p_tilde)},
          {"alpha", real(r.alpha)},
          {"family", r.family},
          {"param", real(r.param)},
          {"numerator", real(r.numerator)},
          {"denominator", real(r.denominator)},
          {"ratio", real(r.ratio)},
          {"flags", r.flags}};
}

RatioRow row_from(const json& j) {
  RatioRow r;
  r.n = j.at("n").get<int>();
  r.p = real_from(j.at("p"));
  r.p_tilde = real_from(j.at("p_tilde"));
  r.alpha = real_from(j.at("alpha"));
  r.family = j.at("family").get<std::string>();
  r.param = real_from(j.at("param"));
  r.numerator = real_from(j.at("numerator"));
  r.denominator = real_from(j.at("denominator"));
  r.ratio = real_from(j.at("ratio"));
  r.flags = j.at("flags").get<std::string>();
  return r;
}

json tail_json(const TailFit& t) {
  return {{"model", t.model}, {"rate", real(t.rate)}, {"log_coefficient", real(t.log_coefficient)},
          {"increments", reals(t.increments)}};
}

TailFit tail_from(const json& j) {
  TailFit t;
  t.model = j.at("model").get<std::string>();
  t.rate = real_from(j.at("rate"));
  t.log_coefficient = real_from(j.at("log_coefficient"));
  t.increments = reals_from(j.at("increments"));
  return t;
}

json split_json(const LemmaParams& lp, const SplitReport& r) {
  return {{"n", lp.n},
          {"p", real(lp.p)},
          {"alpha", real(lp.alpha)},
          {"I", real(r.I)},
          {"II", real(r.II)},
          {"III", real(r.III)},
          {"B", real(r.B)},
          {"delta", real(r.delta)},
          {"M", real(r.M)},
          {"verdict", r.verdict},
          {"divergent_piece", r.divergent_piece},
          {"fitted_rate", real(r.fitted_rate)},
          {"model", r.model},
          {"tail_I", tail_json(r.tail_I)},
          {"tail_III", tail_json(r.tail_III)}};
}

std::pair<LemmaParams, SplitReport> split_from(const json& j) {
  LemmaParams lp;
  lp.n = j.at("n").get<int>();
  lp.p = real_from(j.at("p"));
  lp.alpha = real_from(j.at("alpha"));
  SplitReport r;
  r.I = real_from(j.at("I"));
  r.II = real_from(j.at("II"));
  r.III = real_from(j.at("III"));
  r.B = real_from(j.at("B"));
  r.delta = real_from(j.at("delta"));
  r.M = real_from(j.at("M"));
  r.verdict = j.at("verdict").get<std::string>();
  r.divergent_piece = j.at("divergent_piece").get<std::string>();
  r.fitted_rate = real_from(j.at("fitted_rate"));
  r.model = j.at("model").get<std::string>();
  r.tail_I = tail_from(j.at("tail_I"));
  r.tail_III = tail_from(j.at("tail_III"));
  return {lp, r};
}

json point_json(const PointSummary& s) {
  return {{"p", real(s.p)},
          {"p_tilde", real(s.p_tilde)},
          {"alpha", real(s.alpha)},
          {"admissible", s.admissible},
          {"ratio_max_lower", real(s.ratio_max_lower)},
          {"ratio_max_refined", optional_real(s.ratio_max_refined)},
          {"grid_change", optional_real(s.grid_change)},
          {"dilation_spread", optional_real(s.dilation_spread)},
          {"lemma_ratio_max", optional_real(s.lemma_ratio_max)},
          {"lemma_bound", optional_real(s.lemma_bound)}};
}

PointSummary point_from(const json& j) {
  PointSummary s;
  s.p = real_from(j.at("p"));
  s.p_tilde = real_from(j.at("p_tilde"));
  s.alpha = real_from(j.at("alpha"));
  s.admissible = j.at("admissible").get<bool>();
  s.ratio_max_lower = real_from(j.at("ratio_max_lower"));
  s.ratio_max_refined = optional_from(j.at("ratio_max_refined"));
  s.grid_change = optional_from(j.at("grid_change"));
  s.dilation_spread = optional_from(j.at("dilation_spread"));
  s.lemma_ratio_max = optional_from(j.at("lemma_ratio_max"));
  s.lemma_bound = optional_from(j.at("lemma_bound"));
  return s;
}

BlowupFit blowup_from(const json& j) {
  BlowupFit b;
  b.requested = params_from(j.at("requested"));
  b.probed = params_from(j.at("probed"));
  b.side = j.at("side").get<std::string>();
  b.deltas = reals_from(j.at("deltas"));
  b.ratios = reals_from(j.at("ratios"));
  b.expected_exponent = real_from(j.at("expected_exponent"));
  b.fitted_exponent = real_from(j.at("fitted_exponent"));
  b.power_r2 = real_from(j.at("power_r2"));
  b.log_r2 = real_from(j.at("log_r2"));
  b.f_statistic = real_from(j.at("f_statistic"));
  b.preferred_model = j.at("preferred_model").get<std::string>();
  b.last_decade_change = real_from(j.at("last_decade_change"));
  b.monotone = j.at("monotone").get<bool>();
  return b;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string point_tag(double p, double pt, double a) {
  return "p" + fmt_short(p) + "_pt" + fmt_short(pt) + "_a" + fmt_short(a);
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw Error(ErrorKind::Config, "unknown format '" + std::string(name) + "'");
}

void write_rows_csv(std::ostream& os, const std::vector<RatioRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << fmt17(r.p) << ',' << fmt17(r.p_tilde) << ',' << fmt17(r.alpha) << ',' << r.family << ','
       << fmt17(r.param) << ',' << fmt17(r.numerator) << ',' << fmt17(r.denominator) << ',' << fmt17(r.ratio) << ','
       << r.flags << '\n';
  }
}

nlohmann::json to_json(const BlowupFit& b) {
  return {{"requested", params_json(b.requested)},
          {"probed", params_json(b.probed)},
          {"side", b.side},
          {"deltas", reals(b.deltas)},
          {"ratios", reals(b.ratios)},
          {"expected_exponent", real(b.expected_exponent)},
          {"fitted_exponent", real(b.fitted_exponent)},
          {"power_r2", real(b.power_r2)},
          {"log_r2", real(b.log_r2)},
          {"f_statistic", real(b.f_statistic)},
          {"preferred_model", b.preferred_model},
          {"last_decade_change", real(b.last_decade_change)},
          {"monotone", b.monotone}};
}

nlohmann::json report_to_json(const SweepReport& report) {
  json j;
  j["format"] = "swlab-sweep";
  j["version"] = 1;
  j["n"] = report.n;
  j["rows"] = json::array();
  for (const auto& r : report.rows) j["rows"].push_back(row_json(r));
  j["lemma_rows"] = json::array();
  for (const auto& r : report.lemma_rows) j["lemma_rows"].push_back(row_json(r));
  j["points"] = json::array();
  for (const auto& s : report.points) j["points"].push_back(point_json(s));
  j["blowups"] = json::array();
  for (const auto& b : report.blowups) j["blowups"].push_back(to_json(b));
  j["splits"] = json::array();
  for (const auto& [lp, r] : report.splits) j["splits"].push_back(split_json(lp, r));
  j["failures"] = json::array();
  for (const auto& f : report.failures) j["failures"].push_back({{"where", f.where}, {"message", f.message}});
  j["provenance"] = report.provenance.is_null() ? json::object() : report.provenance;
  return j;
}

SweepReport report_from_json(const nlohmann::json& j) {
  try {
    SweepReport r;
    r.n = j.at("n").get<int>();
    for (const auto& x : j.at("rows")) r.rows.push_back(row_from(x));
    for (const auto& x : j.at("lemma_rows")) r.lemma_rows.push_back(row_from(x));
    for (const auto& x : j.at("points")) r.points.push_back(point_from(x));
    for (const auto& x : j.at("blowups")) r.blowups.push_back(blowup_from(x));
    for (const auto& x : j.at("splits")) r.splits.push_back(split_from(x));
    for (const auto& x : j.at("failures"))
      r.failures.push_back({x.at("where").get<std::string>(), x.at("message").get<std::string>()});
    r.provenance = j.at("provenance");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed report: ") + e.what());
  }
}

std::vector<std::filesystem::path> emit_reports(const SweepReport& report, const std::filesystem::path& dir,
                                                ReportFormat format, bool plot_data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;

  if (format == ReportFormat::Csv) {
    const auto rows_path = dir / "ratios.csv";
    auto os = open_out(rows_path);
    write_rows_csv(os, report.rows);
    finish(os, rows_path);
    written.push_back(rows_path);
    if (!report.lemma_rows.empty()) {
      const auto lemma_path = dir / "lemma_ratios.csv";
      auto ls = open_out(lemma_path);
      write_rows_csv(ls, report.lemma_rows);
      finish(ls, lemma_path);
      written.push_back(lemma_path);
    }
    json summary = report_to_json(report);
    summary.erase("rows");
    summary.erase("lemma_rows");
    const auto summary_path = dir / "summary.json";
    auto ss = open_out(summary_path);
    ss << summary.dump(2) << '\n';
    finish(ss, summary_path);
    written.push_back(summary_path);
  } else {
    const auto path = dir / "report.json";
    auto os = open_out(path);
    os << report_to_json(report).dump(2) << '\n';
    finish(os, path);
    written.push_back(path);
  }

  if (plot_data) {
    const auto plot_dir = dir / "plot";
    std::filesystem::create_directories(plot_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + plot_dir.string() + ": " + ec.message());
    std::map<std::string, std::vector<const RatioRow*>> series;
    for (const auto& r : report.rows) {
      series["ratio_" + r.family + "_" + point_tag(r.p, r.p_tilde, r.alpha)].push_back(&r);
    }
    for (const auto& [name, rows] : series) {
      const auto path = plot_dir / (name + ".dat");
      auto os = open_out(path);
      os << "# param ratio\n";
      for (const RatioRow* r : rows) os << fmt17(r->param) << ' ' << fmt17(r->ratio) << '\n';
      finish(os, path);
      written.push_back(path);
    }
    for (const auto& b : report.blowups) {
      const auto path = plot_dir /
                        ("blowup_" + point_tag(b.requested.p, b.requested.p_tilde, b.requested.alpha) + ".dat");
      auto os = open_out(path);
      os << "# log10(1/delta) log10(ratio)\n";
      for (std::size_t k = 0; k < b.deltas.size(); ++k) {
        os << fmt17(-std::log10(b.deltas[k])) << ' ' << fmt17(std::log10(b.ratios[k])) << '\n';
      }
      finish(os, path);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace swlab
