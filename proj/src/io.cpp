#include "shadowlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shadowlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string snapshots_to_jsonl(const std::string& protocol_id, std::uint64_t seed,
                               const std::vector<Snapshot>& snaps) {
  std::ostringstream os;
  std::size_t counter = 0;
  for (const Snapshot& s : snaps) {
    nlohmann::json j;
    j["protocol"] = protocol_id;
    j["seed"] = seed;
    j["counter"] = counter++;
    j["descriptor"] = s.descriptor.to_json();
    j["outcome"] = s.outcome;
    os << j.dump() << "\n";
  }
  return os.str();
}

std::vector<Snapshot> snapshots_from_jsonl(const std::string& text) {
  std::vector<Snapshot> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    Snapshot s;
    s.descriptor = ElementDescriptor::from_json(j.at("descriptor"));
    s.outcome = j.at("outcome").get<int>();
    out.push_back(std::move(s));
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_text_file: cannot open " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_text_file: cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("config: missing '=' in line: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    out[key] = val;
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "protocol,observable,n,N,mean,empirical_variance,bound_l2,bound_inf,exact,runtime\n";
  for (const SweepRow& r : rows) {
    os << r.protocol << "," << r.observable << "," << r.n << "," << r.n_snapshots << ","
       << format_double(r.mean) << "," << format_double(r.empirical_variance) << ","
       << format_double(r.bound_l2) << "," << format_double(r.bound_inf) << ","
       << (r.exact ? format_double(*r.exact) : "") << "," << format_double(r.runtime_seconds)
       << "\n";
  }
  return os.str();
}

std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title) {
  // series keyed by (protocol, observable)
  std::map<std::string, std::vector<std::pair<int, double>>> series;
  double vmin = 1e300, vmax = 1e-300;
  int nmin = 1 << 30, nmax = 0;
  for (const SweepRow& r : rows) {
    const double v = std::max(1e-12, r.empirical_variance);
    series[r.protocol + " / " + r.observable].push_back({r.n, v});
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    nmin = std::min(nmin, r.n);
    nmax = std::max(nmax, r.n);
  }
  if (series.empty()) return "<svg xmlns='http://www.w3.org/2000/svg'/>\n";
  const double w = 640, h = 440, ml = 70, mr = 180, mt = 40, mb = 50;
  const double lv0 = std::log10(vmin) - 0.2, lv1 = std::log10(vmax) + 0.2;
  auto xmap = [&](double n) {
    return ml + (w - ml - mr) * (nmax == nmin ? 0.5 : (n - nmin) / double(nmax - nmin));
  };
  auto ymap = [&](double v) {
    return h - mb - (h - mt - mb) * (std::log10(v) - lv0) / (lv1 - lv0);
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
     << "</text>\n";
  os << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
     << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
     << "' stroke='black'/>\n";
  for (int n = nmin; n <= nmax; ++n)
    os << "<text x='" << xmap(n) << "' y='" << h - mb + 18
       << "' text-anchor='middle' font-size='11'>" << n << "</text>\n";
  for (int e = static_cast<int>(std::ceil(lv0)); e <= static_cast<int>(std::floor(lv1)); ++e)
    os << "<text x='" << ml - 8 << "' y='" << ymap(std::pow(10.0, e)) + 4
       << "' text-anchor='end' font-size='11'>1e" << e << "</text>\n";
  os << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 12
     << "' text-anchor='middle' font-size='12'>n</text>\n";
  os << "<text x='16' y='" << (mt + h - mb) / 2
     << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 " << (mt + h - mb) / 2
     << ")'>single-shot variance</text>\n";
  int ci = 0;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = kColors[ci % 8];
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto& [n, v] : pts) os << xmap(n) << "," << ymap(v) << " ";
    os << "'/>\n";
    for (const auto& [n, v] : pts)
      os << "<circle cx='" << xmap(n) << "' cy='" << ymap(v) << "' r='2.5' fill='" << color
         << "'/>\n";
    os << "<text x='" << w - mr + 10 << "' y='" << mt + 16 * ci + 10 << "' font-size='10' fill='"
       << color << "'>" << name << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace shadowlab
