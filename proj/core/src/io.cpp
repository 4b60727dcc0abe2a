#include "gelshatter/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gelshatter/rng.hpp"

namespace gelshatter::io {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

json config_to_json(const SimulationConfig& cfg) {
    return json{{"total_mass", cfg.total_mass},
                {"coalescence_rate", cfg.coalescence_rate},
                {"fragmentation_rate", cfg.fragmentation_rate},
                {"frag_threshold", cfg.frag_threshold},
                {"seed", cfg.seed},
                {"max_steps", cfg.max_steps},
                {"sample_interval", cfg.sample_interval},
                {"record_histograms", cfg.record_histograms},
                {"record_delta_signs", cfg.record_delta_signs},
                {"init", to_string(cfg.init)}};
}

SimulationConfig config_from_json(const json& j) {
    SimulationConfig cfg;
    cfg.total_mass = j.at("total_mass").get<std::uint64_t>();
    cfg.coalescence_rate = j.at("coalescence_rate").get<double>();
    cfg.fragmentation_rate = j.at("fragmentation_rate").get<double>();
    cfg.frag_threshold = j.at("frag_threshold").get<std::uint64_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.max_steps = j.at("max_steps").get<std::uint64_t>();
    cfg.sample_interval = j.at("sample_interval").get<std::uint64_t>();
    cfg.record_histograms = j.value("record_histograms", false);
    cfg.record_delta_signs = j.value("record_delta_signs", false);
    cfg.init = initial_condition_from_string(j.value("init", std::string("monomers")));
    return cfg;
}

json histogram_to_json_value(const SizeHistogram& hist) {
    json counts = json::object();
    for (const auto& [size, count] : hist.counts) counts[std::to_string(size)] = count;
    return json{{"total_mass", hist.total_mass}, {"counts", counts}};
}

SizeHistogram histogram_from_json_value(const json& j) {
    SizeHistogram hist;
    hist.total_mass = j.at("total_mass").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("counts").items())
        hist.counts[parse_uint(key, "histogram size")] = value.get<std::uint64_t>();
    hist.validate();
    return hist;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::map<std::string, std::string> parse_flat_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = strip_quotes(trim(line.substr(eq + 1)));
        if (key.empty())
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> read_flat_file(const std::filesystem::path& path) {
    return parse_flat_text(read_text_file(path));
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": cannot parse '" + value + "' as a number");
    }
}

std::uint64_t parse_uint(const std::string& value, const std::string& key) {
    // Accepts scientific notation for step counts and masses (1e5 and such).
    const double v = parse_double(value, key);
    if (v < 0 || v > 1.8e19 || v != std::floor(v))
        throw std::invalid_argument(key + ": '" + value + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument(key + ": cannot parse '" + value + "' as a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_samples_csv(const std::filesystem::path& path,
                       std::span<const TrajectorySample> samples) {
    std::ostringstream os;
    os << "step,N,k_max\n";
    for (const auto& s : samples) os << s.step << ',' << s.n_clusters << ',' << s.k_max << '\n';
    write_text_file(path, os.str());
}

void write_shatter_events_csv(const std::filesystem::path& path,
                              std::span<const ShatterEvent> events) {
    std::ostringstream os;
    os << "step,size,was_largest\n";
    for (const auto& e : events)
        os << e.step << ',' << e.size << ',' << (e.was_largest ? 1 : 0) << '\n';
    write_text_file(path, os.str());
}

void write_size_value_csv(const std::filesystem::path& path, const std::string& key_header,
                          const std::string& value_header,
                          std::span<const std::pair<std::uint64_t, double>> rows) {
    std::ostringstream os;
    os << key_header << ',' << value_header << '\n';
    os.precision(17);
    for (const auto& [size, value] : rows) os << size << ',' << value << '\n';
    write_text_file(path, os.str());
}

void write_heatmap_csv(const std::filesystem::path& path, const HeatMap& map) {
    std::ostringstream os;
    for (std::uint32_t y = 0; y < map.bins_y; ++y) {
        for (std::uint32_t x = 0; x < map.bins_x; ++x) {
            if (x) os << ',';
            os << map.at(x, y);
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

void write_heatmap_sidecar(const std::filesystem::path& path, const HeatMap& map,
                           std::uint64_t total_mass) {
    json j;
    j["bins_x"] = map.bins_x;
    j["bins_y"] = map.bins_y;
    j["x_axis"] = "k_max/M";
    j["y_axis"] = "N/M";
    j["total_mass"] = total_mass;
    j["x_edges"] = json::array();
    j["y_edges"] = json::array();
    for (std::uint32_t x = 0; x <= map.bins_x; ++x)
        j["x_edges"].push_back(static_cast<double>(x) / map.bins_x);
    for (std::uint32_t y = 0; y <= map.bins_y; ++y)
        j["y_edges"].push_back(static_cast<double>(y) / map.bins_y);
    j["samples"] = map.total();
    write_text_file(path, j.dump(2) + "\n");
}

void write_scaling_csv(const std::filesystem::path& path,
                       std::span<const analysis::ScalingPoint> points) {
    std::ostringstream os;
    os << "M,K_hat,F_hat,r,mean_tr,g,cyclicity,n_cycles\n";
    os.precision(17);
    for (const auto& p : points) {
        os << p.total_mass << ',' << p.k_hat << ',' << p.f_hat << ',' << p.r << ','
           << p.mean_tr << ',' << p.g << ',' << p.cyclicity << ',' << p.n_cycles << '\n';
    }
    write_text_file(path, os.str());
}

std::string trajectory_to_json(const Trajectory& trajectory) {
    json j;
    j["config"] = config_to_json(trajectory.config);
    j["seed"] = trajectory.config.seed;
    j["final_step"] = trajectory.final_step;
    j["rng_fingerprint"] = to_hex(trajectory.rng_fingerprint);
    j["coalescence_attempts"] = trajectory.coalescence_attempts;
    j["fragmentation_attempts"] = trajectory.fragmentation_attempts;
    j["delta_counts"] = {{"up", trajectory.delta_counts.up},
                         {"down", trajectory.delta_counts.down},
                         {"total", trajectory.delta_counts.total}};
    auto samples = json::array();
    for (const auto& s : trajectory.samples)
        samples.push_back(json::array({s.step, s.n_clusters, s.k_max}));
    j["samples"] = std::move(samples);
    auto events = json::array();
    for (const auto& e : trajectory.shatter_events)
        events.push_back(json::array({e.step, e.size, e.was_largest ? 1 : 0}));
    j["shatter_events"] = std::move(events);
    j["final_state"] = histogram_to_json_value(trajectory.final_state);
    j["final_rng_state"] = trajectory.final_rng_state;
    return j.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
    const json j = json::parse(text);
    Trajectory t;
    t.config = config_from_json(j.at("config"));
    t.final_step = j.at("final_step").get<std::uint64_t>();
    t.coalescence_attempts = j.value("coalescence_attempts", std::uint64_t{0});
    t.fragmentation_attempts = j.value("fragmentation_attempts", std::uint64_t{0});
    if (j.contains("delta_counts")) {
        t.delta_counts.up = j["delta_counts"].at("up").get<std::uint64_t>();
        t.delta_counts.down = j["delta_counts"].at("down").get<std::uint64_t>();
        t.delta_counts.total = j["delta_counts"].at("total").get<std::uint64_t>();
    }
    for (const auto& s : j.at("samples"))
        t.samples.push_back({s.at(0).get<std::uint64_t>(), s.at(1).get<std::uint64_t>(),
                             s.at(2).get<std::uint64_t>()});
    for (const auto& e : j.at("shatter_events"))
        t.shatter_events.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>(),
                                    e.at(2).get<int>() != 0});
    t.final_state = histogram_from_json_value(j.at("final_state"));
    t.final_rng_state = j.at("final_rng_state").get<std::string>();
    t.rng_fingerprint = fnv1a64(t.final_rng_state);
    return t;
}

void write_trajectory_json(const std::filesystem::path& path, const Trajectory& trajectory) {
    write_text_file(path, trajectory_to_json(trajectory));
}

Trajectory read_trajectory_json(const std::filesystem::path& path) {
    return trajectory_from_json(read_text_file(path));
}

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
    json j;
    j["config"] = config_to_json(checkpoint.config);
    j["step"] = checkpoint.step;
    j["state"] = histogram_to_json_value(checkpoint.state);
    j["rng_state"] = checkpoint.rng_state;
    return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
    const json j = json::parse(text);
    Checkpoint cp;
    cp.config = config_from_json(j.at("config"));
    cp.step = j.at("step").get<std::uint64_t>();
    cp.state = histogram_from_json_value(j.at("state"));
    cp.rng_state = j.at("rng_state").get<std::string>();
    return cp;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    write_text_file(path, checkpoint_to_json(checkpoint));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    return checkpoint_from_json(read_text_file(path));
}

std::string histogram_to_json(const SizeHistogram& hist) {
    return histogram_to_json_value(hist).dump() + "\n";
}

SizeHistogram histogram_from_json(const std::string& text) {
    return histogram_from_json_value(json::parse(text));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string file_digest(const std::filesystem::path& path) {
    return to_hex(fnv1a64(read_text_file(path)));
}

}  // namespace gelshatter::io
