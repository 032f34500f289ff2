#include "spectemp/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spectemp/io.hpp"

namespace spectemp {

namespace {

struct Event {
  int node;
  long timestamp;
  double value;
};

std::vector<Event> parse_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<Event> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected node,timestamp,value");
    try {
      Event e{std::stoi(a), std::stol(b), std::stod(c)};
      events.push_back(e);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header row
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not numeric: " + line);
    }
  }
  if (events.empty()) throw std::runtime_error(path + ": no events");
  return events;
}

void check_window(const TimeWindow& w, const std::string& label, const char* which) {
  if (w.start_hour < 0 || w.start_hour > 23 || w.end_hour < 1 || w.end_hour > 24 ||
      w.end_hour <= w.start_hour)
    throw std::invalid_argument("process '" + label + "': invalid " + which + " window [" +
                                std::to_string(w.start_hour) + ", " + std::to_string(w.end_hour) +
                                ")");
}

bool in_window(int hour, const TimeWindow& w) { return hour >= w.start_hour && hour < w.end_hour; }

}  // namespace

IngestResult ingest_signals(const std::string& csv_path, const std::vector<ProcessSpec>& processes,
                            int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("ingest_signals: n_nodes must be positive");
  if (processes.empty()) throw std::invalid_argument("ingest_signals: no processes specified");
  for (const auto& p : processes) {
    check_window(p.input, p.label, "input");
    check_window(p.output, p.label, "output");
    for (int d : p.days_of_week)
      if (d < 0 || d > 6)
        throw std::invalid_argument("process '" + p.label + "': day-of-week out of range");
  }

  std::vector<Event> events = parse_events(csv_path);
  for (const auto& e : events)
    if (e.node < 0 || e.node >= n_nodes)
      throw std::runtime_error("unknown node id " + std::to_string(e.node) + " (have " +
                               std::to_string(n_nodes) + " nodes)");

  IngestResult out;
  for (const auto& p : processes) {
    std::set<int> mask(p.days_of_week.begin(), p.days_of_week.end());
    // day -> per-node sums for each window
    std::map<long, std::pair<Vec, Vec>> per_day;
    long n_in = 0, n_out = 0;
    for (const auto& e : events) {
      const long day = e.timestamp / 24;
      const int hour = static_cast<int>(e.timestamp % 24);
      if (!mask.empty() && !mask.count(static_cast<int>(day % 7))) continue;
      const bool hit_in = in_window(hour, p.input);
      const bool hit_out = in_window(hour, p.output);
      if (!hit_in && !hit_out) continue;
      auto it = per_day.find(day);
      if (it == per_day.end())
        it = per_day.emplace(day, std::make_pair(Vec::Zero(n_nodes), Vec::Zero(n_nodes))).first;
      if (hit_in) {
        it->second.first(e.node) += e.value;
        ++n_in;
      }
      if (hit_out) {
        it->second.second(e.node) += e.value;
        ++n_out;
      }
    }
    if (n_in == 0)
      throw std::runtime_error("process '" + p.label + "': input window [" +
                               std::to_string(p.input.start_hour) + ", " +
                               std::to_string(p.input.end_hour) + ") matched no events");
    if (n_out == 0)
      throw std::runtime_error("process '" + p.label + "': output window [" +
                               std::to_string(p.output.start_hour) + ", " +
                               std::to_string(p.output.end_hour) + ") matched no events");

    ProcessSignals sig;
    sig.label = p.label;
    sig.x = Mat(n_nodes, static_cast<int>(per_day.size()));
    sig.y = Mat(n_nodes, static_cast<int>(per_day.size()));
    int col = 0;
    for (const auto& [day, xy] : per_day) {
      sig.x.col(col) = xy.first;
      sig.y.col(col) = xy.second;
      sig.days.push_back(day);
      ++col;
    }
    CovariancePair pair;
    pair.c_x = sample_covariance(sig.x);
    pair.c_y_hat = sample_covariance(sig.y);
    pair.samples = static_cast<int>(sig.days.size());
    out.signals.push_back(std::move(sig));
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

std::vector<ProcessSpec> load_grouping_spec(const std::string& json_path) {
  nlohmann::json j = io::read_json(json_path);
  if (!j.contains("processes") || !j.at("processes").is_array() || j.at("processes").empty())
    throw std::runtime_error(json_path + ": expected a non-empty 'processes' array");
  std::vector<ProcessSpec> out;
  for (const auto& pj : j.at("processes")) {
    ProcessSpec p;
    p.label = pj.value("label", "process-" + std::to_string(out.size()));
    if (pj.contains("days_of_week"))
      for (const auto& d : pj.at("days_of_week")) p.days_of_week.push_back(d.get<int>());
    auto window = [&](const char* key) {
      if (!pj.contains(key))
        throw std::runtime_error(json_path + ": process '" + p.label + "' missing '" + key + "'");
      const auto& wj = pj.at(key);
      TimeWindow w;
      w.start_hour = wj.at(0).get<int>();
      w.end_hour = wj.at(1).get<int>();
      return w;
    };
    p.input = window("input_window");
    p.output = window("output_window");
    out.push_back(std::move(p));
  }
  return out;
}

void save_grouping_spec(const std::string& json_path, const std::vector<ProcessSpec>& processes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : processes) {
    nlohmann::json pj;
    pj["label"] = p.label;
    if (!p.days_of_week.empty()) pj["days_of_week"] = p.days_of_week;
    pj["input_window"] = {p.input.start_hour, p.input.end_hour};
    pj["output_window"] = {p.output.start_hour, p.output.end_hour};
    arr.push_back(std::move(pj));
  }
  io::write_json(json_path, nlohmann::json{{"processes", arr}});
}

}  // namespace spectemp
