#include "palm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace palm {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::vector<std::pair<double, double>> parse_points_csv(const std::string& content) {
  std::vector<std::pair<double, double>> points;
  std::istringstream in(content);
  std::string line;
  size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      std::string stripped;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
      if (stripped != "x,y") throw CsvError(lineno, "expected header 'x,y'");
      saw_header = true;
      continue;
    }
    size_t comma = line.find(',');
    if (comma == std::string::npos) throw CsvError(lineno, "expected 'x,y' row: '" + line + "'");
    try {
      size_t used = 0;
      double x = std::stod(line.substr(0, comma), &used);
      double y = std::stod(line.substr(comma + 1), &used);
      points.emplace_back(x, y);
    } catch (const std::exception&) {
      throw CsvError(lineno, "cannot parse row '" + line + "'");
    }
  }
  if (!saw_header && lineno > 0) throw CsvError(1, "expected header 'x,y'");
  return points;
}

std::vector<std::pair<double, double>> read_points_csv(const std::string& path) {
  return parse_points_csv(read_file(path));
}

namespace {

std::string format_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string points_to_csv(const Dataset2D& data) {
  std::string out = "x,y\n";
  for (size_t i = 0; i < data.points.size(); ++i) {
    auto [x, y] = data.coord(i);
    out += format_coord(x);
    out += ',';
    out += format_coord(y);
    out += '\n';
  }
  return out;
}

void write_points_csv(const std::string& path, const Dataset2D& data) {
  write_file(path, points_to_csv(data));
}

namespace {

json grid_to_json(const GridSpec& g) {
  json j;
  j["epsilon"] = g.epsilon;
  j["origin"] = {g.origin_x, g.origin_y};
  j["extent"] = {g.width, g.height};
  return j;
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.epsilon = j.at("epsilon").get<double>();
  g.origin_x = j.at("origin").at(0).get<double>();
  g.origin_y = j.at("origin").at(1).get<double>();
  g.width = j.at("extent").at(0).get<int64_t>();
  g.height = j.at("extent").at(1).get<int64_t>();
  if (!(g.epsilon > 0.0) || g.width < 1 || g.height < 1)
    throw std::runtime_error("invalid grid in file");
  return g;
}

json regions_to_json(const Partition& p, const DensityVector& d) {
  json regions = json::array();
  for (size_t i = 0; i < p.regions.size(); ++i) {
    const auto& region = p.regions[i];
    json rects = json::array();
    for (const auto& r : region.rects) rects.push_back({r.x0, r.y0, r.x1, r.y1});
    json jr;
    jr["rects"] = std::move(rects);
    jr["density"] = i < d.values.size() ? d.values[i] : 0.0;
    jr["count"] = region.count;
    regions.push_back(std::move(jr));
  }
  return regions;
}

void regions_from_json(const json& regions, Partition& p, DensityVector& d) {
  for (const auto& jr : regions) {
    std::vector<Rect> rects;
    for (const auto& r : jr.at("rects"))
      rects.push_back({r.at(0).get<int64_t>(), r.at(1).get<int64_t>(), r.at(2).get<int64_t>(),
                       r.at(3).get<int64_t>()});
    p.regions.push_back(make_region(std::move(rects), jr.at("count").get<int64_t>()));
    d.values.push_back(jr.at("density").get<double>());
  }
}

}  // namespace

std::string partition_to_json(const PartitionDoc& doc) {
  json j = grid_to_json(doc.partition.grid);
  j["regions"] = regions_to_json(doc.partition, doc.densities);
  j["meta"] = {{"n", doc.meta.n},
               {"total_bits", doc.meta.total_bits},
               {"k_max", doc.meta.k_max},
               {"direction", doc.meta.direction},
               {"seed", doc.meta.seed}};
  return j.dump(2) + "\n";
}

PartitionDoc partition_from_json(const std::string& text) {
  json j = json::parse(text);
  PartitionDoc doc;
  doc.partition.grid = grid_from_json(j);
  regions_from_json(j.at("regions"), doc.partition, doc.densities);
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    doc.meta.n = m.value("n", int64_t{0});
    doc.meta.total_bits = m.value("total_bits", 0.0);
    doc.meta.k_max = m.value("k_max", 0);
    doc.meta.direction = m.value("direction", std::string("vertical"));
    doc.meta.seed = m.value("seed", uint64_t{0});
  }
  return doc;
}

void write_partition_json(const std::string& path, const PartitionDoc& doc) {
  write_file(path, partition_to_json(doc));
}

PartitionDoc read_partition_json(const std::string& path) {
  return partition_from_json(read_file(path));
}

std::string truth_to_json(const GroundTruth& truth, uint64_t seed) {
  json j;
  switch (truth.kind) {
    case GroundTruth::Kind::partition:
    case GroundTruth::Kind::quadrant: {
      j = grid_to_json(truth.grid);
      j["regions"] = regions_to_json(truth.partition, truth.densities);
      json t;
      t["kind"] = truth.kind == GroundTruth::Kind::quadrant ? "quadrant" : "partition";
      if (truth.kind == GroundTruth::Kind::quadrant) {
        t["cut_x"] = truth.cut_x;
        t["cut_y"] = truth.cut_y;
      }
      t["seed"] = seed;
      j["truth"] = std::move(t);
      break;
    }
    case GroundTruth::Kind::sine: {
      j = grid_to_json(truth.grid);
      j["truth"] = {{"kind", "sine"}, {"m", truth.sine_m}, {"seed", seed}};
      break;
    }
    case GroundTruth::Kind::gaussian: {
      j = grid_to_json(truth.grid);
      j["truth"] = {{"kind", "gaussian"}, {"correlation", truth.correlation}, {"seed", seed}};
      break;
    }
  }
  return j.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("truth")) throw std::runtime_error("not a truth file: missing 'truth' block");
  GridSpec grid = grid_from_json(j);
  std::string kind = j["truth"].at("kind").get<std::string>();
  if (kind == "sine") {
    int m = j["truth"].at("m").get<int>();
    // Rebuild the analytic truth deterministically from its descriptor;
    // an empty dataset draw keeps only the density definition.
    auto [data, truth] = gen_sine(m, 0, 0, grid);
    return truth;
  }
  if (kind == "gaussian") {
    double rho = j["truth"].at("correlation").get<double>();
    auto [data, truth] = gen_gaussian(rho, 0, 0, grid);
    return truth;
  }
  GroundTruth truth;
  truth.kind = kind == "quadrant" ? GroundTruth::Kind::quadrant : GroundTruth::Kind::partition;
  truth.grid = grid;
  truth.partition.grid = grid;
  regions_from_json(j.at("regions"), truth.partition, truth.densities);
  if (kind == "quadrant") {
    truth.cut_x = j["truth"].value("cut_x", 0.0);
    truth.cut_y = j["truth"].value("cut_y", 0.0);
  }
  validate_partition(truth.partition);
  truth.region_raster = rasterize_partition(truth.partition);
  return truth;
}

void write_truth_json(const std::string& path, const GroundTruth& truth, uint64_t seed) {
  write_file(path, truth_to_json(truth, seed));
}

GroundTruth read_truth_json(const std::string& path) { return truth_from_json(read_file(path)); }

std::string eval_report_to_json(const EvalReport& r) {
  auto num = [](double v) { return std::isinf(v) ? json("inf") : json(v); };
  json j;
  j["mise"] = r.mise;
  if (r.has_boundary_losses) {
    j["l_learn"] = num(r.l_learn);
    j["l_true"] = num(r.l_true);
    j["l_learn_mean"] = num(r.l_learn_mean);
    j["l_true_mean"] = num(r.l_true_mean);
    j["learned_boundary_empty"] = r.learned_boundary_empty;
    j["truth_boundary_empty"] = r.truth_boundary_empty;
  } else {
    j["l_learn"] = nullptr;
    j["l_true"] = nullptr;
  }
  j["region_count_learned"] = r.region_count_learned;
  j["region_count_true"] = r.region_count_true;
  j["runtime_seconds"] = r.runtime_seconds;
  return j.dump(2) + "\n";
}

void write_eval_report(const std::string& path, const EvalReport& report) {
  write_file(path, eval_report_to_json(report));
}

}  // namespace palm
