#include "hslag/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "hslag/errors.hpp"

namespace hslag {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

double number_field(const json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "missing");
    if (!j.at(field).is_number()) bad_field(field, "expected a number");
    return j.at(field).get<double>();
}

cplx pair_to_cplx(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        bad_field(field, "expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    RunConfig cfg;
    if (!j.contains("singularities") || !j.at("singularities").is_array())
        bad_field("singularities", "expected an array");
    for (std::size_t l = 0; l < j.at("singularities").size(); ++l) {
        const json& e = j.at("singularities")[l];
        const std::string where = "singularities[" + std::to_string(l) + "]";
        if (!e.is_object()) bad_field(where, "expected an object");
        const double x = number_field(e, "x");
        const double y = number_field(e, "y");
        if (!e.contains("degree") || !e.at("degree").is_number_integer())
            bad_field(where + ".degree", "expected an integer");
        cfg.singularities.points.push_back({cplx{x, y}, e.at("degree").get<int>()});
    }
    cfg.singularities.validate();

    if (!j.contains("boundary") || !j.at("boundary").is_object())
        bad_field("boundary", "expected an object");
    const json& b = j.at("boundary");
    if (!b.contains("truncation") || !b.at("truncation").is_number_integer() ||
        b.at("truncation").get<int>() < 0)
        bad_field("boundary.truncation", "expected a nonnegative integer");
    const int k = b.at("truncation").get<int>();
    if (!b.contains("coefficients") || !b.at("coefficients").is_array() ||
        b.at("coefficients").size() != static_cast<std::size_t>(2 * k + 1))
        bad_field("boundary.coefficients", "expected 2K+1 [re, im] pairs");
    std::vector<cplx> coeffs(2 * k + 1);
    for (int i = 0; i < 2 * k + 1; ++i)
        coeffs[i] = pair_to_cplx(b.at("coefficients")[i], "boundary.coefficients");
    cfg.boundary = BoundaryTrace(std::move(coeffs));

    cfg.h = number_field(j, "h");
    if (!(cfg.h > 0.0 && cfg.h <= 0.25)) bad_field("h", "must lie in (0, 0.25]");

    if (!j.contains("schedule") || !j.at("schedule").is_array())
        bad_field("schedule", "expected an array of numbers");
    cfg.schedule.clear();
    for (const auto& e : j.at("schedule")) {
        if (!e.is_number()) bad_field("schedule", "expected an array of numbers");
        cfg.schedule.push_back(e.get<double>());
    }

    if (j.contains("truncation")) {
        if (!j.at("truncation").is_number_integer() || j.at("truncation").get<int>() < 0)
            bad_field("truncation", "expected a nonnegative integer");
        cfg.truncation = j.at("truncation").get<int>();
    } else {
        cfg.truncation = k;
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) bad_field("out", "expected a string");
        cfg.out_dir = j.at("out").get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) bad_field("seed", "expected an unsigned integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    return cfg;
}

std::string emit_run_config(const RunConfig& cfg) {
    json j;
    j["singularities"] = json::array();
    for (const auto& s : cfg.singularities.points)
        j["singularities"].push_back({{"x", s.p.real()}, {"y", s.p.imag()}, {"degree", s.degree}});
    json coeffs = json::array();
    for (const auto& c : cfg.boundary.raw()) coeffs.push_back({c.real(), c.imag()});
    j["boundary"] = {{"truncation", cfg.boundary.truncation()}, {"coefficients", coeffs}};
    j["h"] = cfg.h;
    j["schedule"] = cfg.schedule;
    j["truncation"] = cfg.truncation;
    j["out"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

namespace {

void atomic_write(const std::string& path, const char* data, std::size_t size) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw ConfigError("cannot create directory " + target.parent_path().string());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
        out.write(data, static_cast<std::streamsize>(size));
        if (!out) throw ConfigError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw ConfigError("cannot rename " + tmp.string() + " into place");
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    atomic_write(path, content.data(), content.size());
}

void atomic_write_bytes(const std::string& path, const std::vector<char>& bytes) {
    atomic_write(path, bytes.data(), bytes.size());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string energy_csv(const std::vector<EnergyRow>& rows) {
    std::string out = "t,dirichlet,coupling,total,l2inf\n";
    for (const auto& r : rows) {
        out += format_double(r.t) + "," + format_double(r.dirichlet) + "," +
               format_double(r.coupling) + "," + format_double(r.total) + "," +
               format_double(r.l2inf) + "\n";
    }
    return out;
}

std::string margins_csv(const std::vector<WenteMarginRow>& rows) {
    std::string out = "seed,lhs,rhs,margin\n";
    for (const auto& r : rows) {
        out += std::to_string(r.seed) + "," + format_double(r.lhs) + "," + format_double(r.rhs) +
               "," + format_double(r.margin) + "\n";
    }
    return out;
}

namespace {

json report_to_json(const ResidualReport& r) {
    return {{"channel", r.channel}, {"max", r.max}, {"l2", r.l2}, {"h", r.h}};
}

}  // namespace

std::string fit_json(const SweepResult& sweep) {
    json j;
    j["backend"] = sweep.backend == SweepBackend::Spectral ? "spectral" : "grid";
    j["h"] = sweep.h;
    j["slope"] = sweep.fit.slope;
    j["theta_hat"] = sweep.fit.theta_hat;
    j["window"] = {{"begin", sweep.fit.window_begin}, {"end", sweep.rows.size()}};
    j["rows"] = sweep.rows.size();
    return j.dump(2) + "\n";
}

std::string rank_json(const RankReport& report) {
    json j;
    j["singular_values"] = report.singular_values;
    j["threshold_raw"] = report.threshold_raw;
    j["threshold"] = report.threshold;
    j["richardson"] = report.richardson;
    j["rank_raw"] = report.rank_raw;
    j["rank"] = report.rank;
    json m = json::array();
    for (const auto& row : report.matrix) {
        json jr = json::array();
        for (const auto& v : row) jr.push_back({v.real(), v.imag()});
        m.push_back(jr);
    }
    j["matrix"] = m;
    return j.dump(2) + "\n";
}

std::string admissibility_json(const AdmissibilityReport& report) {
    json j;
    j["h"] = report.h;
    j["balanced"] = report.balanced;
    j["verdict"] = report.verdict;
    json levels = json::array();
    for (const auto& lv : report.levels) {
        json comps = json::array();
        for (const auto& c : lv.components)
            comps.push_back({{"cells", c.cells},
                             {"singularities", c.singularities},
                             {"flux", c.flux},
                             {"simply_connected", c.simply_connected},
                             {"thin", c.thin}});
        levels.push_back({{"level", lv.level}, {"components", comps}});
    }
    j["levels"] = levels;
    return j.dump(2) + "\n";
}

std::string residual_json(const std::vector<ResidualReport>& reports) {
    json j = json::array();
    for (const auto& r : reports) j.push_back(report_to_json(r));
    return j.dump(2) + "\n";
}

namespace {

template <typename T>
void put(std::vector<char>& out, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    out.insert(out.end(), p, p + sizeof(T));
}

double project(const std::array<double, 4>& v, MeshProjection proj, int axis) {
    // Select 3 of the 4 coordinates; axis in {0,1,2}.
    static constexpr int keep[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    int row;
    switch (proj) {
        case MeshProjection::DropImPhi2: row = 0; break;
        case MeshProjection::DropRePhi2: row = 1; break;
        case MeshProjection::DropImPhi1: row = 2; break;
        default: row = 3; break;
    }
    return v[keep[row][axis]];
}

}  // namespace

std::vector<char> field_bytes(const ScalarField& u) {
    const DiscGrid& grid = u.grid();
    std::vector<char> out;
    out.reserve(16 + grid.node_count() * 24);
    out.insert(out.end(), {'H', 'S', 'L', 'G'});
    put(out, std::uint32_t{1});
    put(out, grid.h());
    put(out, static_cast<std::uint64_t>(grid.node_count()));
    const double h = grid.h();
    for (std::uint32_t id = 0; id < grid.node_count(); ++id) {
        const cplx z = grid.position(id);
        put(out, static_cast<std::int32_t>(std::lround(z.real() / h - 0.5)));
        put(out, static_cast<std::int32_t>(std::lround(z.imag() / h - 0.5)));
        put(out, u[id].real());
        put(out, u[id].imag());
    }
    return out;
}

std::string field_sidecar_json(const ScalarField& u) {
    json j;
    j["magic"] = "HSLG";
    j["version"] = 1;
    j["h"] = u.grid().h();
    j["count"] = u.grid().node_count();
    j["record"] = "int32 i, int32 j, float64 re, float64 im";
    return j.dump(2) + "\n";
}

void write_ply(const std::string& path, const MeshData& mesh, bool ascii, MeshProjection proj) {
    std::string header = "ply\nformat ";
    header += ascii ? "ascii 1.0" : "binary_little_endian 1.0";
    header += "\nelement vertex " + std::to_string(mesh.vertices.size());
    header += "\nproperty float x\nproperty float y\nproperty float z\n";
    header += "element face " + std::to_string(mesh.faces.size());
    header += "\nproperty list uchar int vertex_indices\nend_header\n";

    if (ascii) {
        std::string body;
        for (const auto& v : mesh.vertices) {
            body += format_double(project(v, proj, 0)) + " " + format_double(project(v, proj, 1)) +
                    " " + format_double(project(v, proj, 2)) + "\n";
        }
        for (const auto& f : mesh.faces) {
            body += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " +
                    std::to_string(f[2]) + "\n";
        }
        atomic_write_text(path, header + body);
        return;
    }
    std::vector<char> out(header.begin(), header.end());
    for (const auto& v : mesh.vertices) {
        for (int axis = 0; axis < 3; ++axis)
            put(out, static_cast<float>(project(v, proj, axis)));
    }
    for (const auto& f : mesh.faces) {
        put(out, static_cast<std::uint8_t>(3));
        for (const auto idx : f) put(out, static_cast<std::int32_t>(idx));
    }
    atomic_write_bytes(path, out);
}

void write_obj(const std::string& path, const MeshData& mesh, MeshProjection proj) {
    std::string out = "# hslag mesh\n";
    for (const auto& v : mesh.vertices) {
        out += "v " + format_double(project(v, proj, 0)) + " " + format_double(project(v, proj, 1)) +
               " " + format_double(project(v, proj, 2)) + "\n";
    }
    for (const auto& f : mesh.faces) {
        out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
               std::to_string(f[2] + 1) + "\n";
    }
    atomic_write_text(path, out);
}

}  // namespace hslag
