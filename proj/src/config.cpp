#include "mareach/config.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mareach/sim.hpp"

namespace mareach {

using nlohmann::json;

std::string tool_version() { return "0.1.0"; }

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return j;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError("unknown field \"" + it.key() + "\" in " + where);
}

Vec parse_vec(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError(where + ": expected numbers");
        v[static_cast<int>(i)] = j[i].get<double>();
    }
    return v;
}

Mat parse_mat(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a 2-D array");
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    Mat m(j.size(), cols);
    for (size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ParseError(where + ": ragged or non-2-D array");
        for (size_t c = 0; c < cols; ++c) m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
    return m;
}

json vec_json(const Vec& v) {
    json j = json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

json mat_json(const Mat& m) {
    json j = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

std::vector<std::pair<int, Mat>> parse_neighbor_mats(const json& j, const std::string& where) {
    std::vector<std::pair<int, Mat>> out;
    if (!j.is_object()) throw ParseError(where + ": expected an object keyed by neighbor id");
    for (auto it = j.begin(); it != j.end(); ++it)
        out.emplace_back(std::stoi(it.key()), parse_mat(it.value(), where + "[" + it.key() + "]"));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace

Mlp load_weights(const std::filesystem::path& path) {
    json j = read_json(path);
    check_keys(j, {"layers"}, path.string());
    if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty())
        throw ShapeError(path.string() + ": missing or empty \"layers\"");
    Mlp net;
    int layer_idx = 0;
    for (const auto& jl : j["layers"]) {
        check_keys(jl, {"W", "b"}, path.string() + " layer " + std::to_string(layer_idx));
        if (!jl.contains("W") || !jl.contains("b"))
            throw ShapeError(path.string() + ": layer " + std::to_string(layer_idx) +
                             " needs W and b");
        Mat W = parse_mat(jl["W"], "W");
        Vec b = parse_vec(jl["b"], "b");
        if (b.size() != W.rows())
            throw ShapeError(path.string() + ": layer " + std::to_string(layer_idx) +
                             ": W has " + std::to_string(W.rows()) + " rows but b has " +
                             std::to_string(b.size()) + " entries");
        if (layer_idx > 0 && W.cols() != net.layers.back().W.rows())
            throw ShapeError(path.string() + ": layer " + std::to_string(layer_idx) +
                             ": input width does not chain with the previous layer");
        net.layers.push_back({std::move(W), std::move(b)});
        ++layer_idx;
    }
    return net;
}

void save_weights(const Mlp& net, const std::filesystem::path& path) {
    json j;
    j["layers"] = json::array();
    for (const auto& l : net.layers) j["layers"].push_back({{"W", mat_json(l.W)}, {"b", vec_json(l.b)}});
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(1) << "\n";
}

Mlp synth_weights(int n_x, int n_u, const std::vector<int>& hidden, std::uint64_t seed,
                  double scale) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Mlp net;
    int in = 2 * n_x;
    for (size_t l = 0; l <= hidden.size(); ++l) {
        const int out = l < hidden.size() ? hidden[l] : n_u;
        Mat W(out, in);
        Vec b(out);
        for (int r = 0; r < out; ++r) {
            for (int c = 0; c < in; ++c) W(r, c) = scale * nd(rng);
            b[r] = 0.1 * scale * nd(rng);
        }
        net.layers.push_back({std::move(W), std::move(b)});
        in = out;
    }
    return net;
}

std::vector<WeightStub> scan_weight_refs(const std::filesystem::path& config_path) {
    json j = read_json(config_path);
    if (!j.contains("agents")) throw ParseError(config_path.string() + ": no agents");
    std::vector<WeightStub> stubs;
    const auto base = config_path.parent_path();
    for (const auto& ja : j["agents"]) {
        if (ja.value("static", false) || !ja.contains("networks")) continue;
        WeightStub proto;
        proto.i = ja.at("id").get<int>();
        const json& dyn = ja.contains("continuous") ? ja["continuous"] : ja["discrete"];
        proto.n_x = static_cast<int>(dyn.at("A_self").size());
        proto.n_u = dyn.contains("B") ? static_cast<int>(dyn["B"][0].size()) : 0;
        for (auto it = ja["networks"].begin(); it != ja["networks"].end(); ++it) {
            WeightStub s = proto;
            s.j = std::stoi(it.key());
            s.path = base / it.value().get<std::string>();
            stubs.push_back(std::move(s));
        }
    }
    return stubs;
}

Scenario prefix_scenario(const Scenario& s, int verified) {
    const auto all = s.verified_ids();
    if (verified < 1 || verified > static_cast<int>(all.size()))
        throw InvalidDimension("prefix_scenario: verified count out of range");
    std::set<int> keep(all.begin(), all.begin() + verified);

    std::set<int> with_static = keep;
    for (int id : keep)
        for (const auto& [jid, m] : s.graph.agent(id).A_neighbors) {
            if (keep.count(jid)) continue;
            const AgentModel& nb = s.graph.agent(jid);
            if (!nb.is_static)
                throw Error("prefix_scenario: agent " + std::to_string(id) +
                            " depends on dropped agent " + std::to_string(jid) +
                            "; the scenario is not prefix-closed");
            with_static.insert(jid);
        }

    Scenario out;
    for (const auto& a : s.graph.agents)
        if (with_static.count(a.id)) out.graph.agents.push_back(a);
    for (const auto& [key, net] : s.nets)
        if (keep.count(key.first)) out.nets[key] = net;
    for (const auto& [id, box] : s.init)
        if (keep.count(id)) out.init[id] = box;
    for (const auto& [id, ref] : s.reference)
        if (with_static.count(id)) out.reference[id] = ref;
    if (s.uncertainty) {
        UncertaintySpec u;
        for (const auto& [id, verts] : s.uncertainty->A_vertices)
            if (keep.count(id)) u.A_vertices[id] = verts;
        for (const auto& [id, verts] : s.uncertainty->B_vertices)
            if (keep.count(id)) u.B_vertices[id] = verts;
        if (!u.A_vertices.empty() || !u.B_vertices.empty()) out.uncertainty = std::move(u);
    }
    return out;
}

RunConfig load_config(const std::filesystem::path& path) {
    json j = read_json(path);
    check_keys(j,
               {"name", "horizon", "seed", "mode", "workers", "solver", "agents", "uncertainty",
                "comment"},
               "config root");

    RunConfig cfg;
    cfg.config_hash = fnv1a_hex(j.dump());
    cfg.name = j.value("name", path.stem().string());
    cfg.horizon = j.value("horizon", 1);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.mode = j.value("mode", "per-agent");
    if (cfg.mode != "per-agent" && cfg.mode != "monolithic")
        throw ParseError("mode must be \"per-agent\" or \"monolithic\"");
    cfg.workers = j.value("workers", 1);
    if (j.contains("solver")) {
        const json& js = j["solver"];
        check_keys(js, {"tol", "cert_tol", "max_iters", "prescale", "degenerate_width"},
                   "solver");
        cfg.sdp.tol = js.value("tol", cfg.sdp.tol);
        cfg.sdp.cert_tol = js.value("cert_tol", cfg.sdp.cert_tol);
        cfg.sdp.max_iters = js.value("max_iters", cfg.sdp.max_iters);
        cfg.sdp.prescale = js.value("prescale", cfg.sdp.prescale);
        cfg.sdp.degenerate_width = js.value("degenerate_width", cfg.sdp.degenerate_width);
    }

    if (!j.contains("agents") || !j["agents"].is_array() || j["agents"].empty())
        throw ParseError("config needs a nonempty \"agents\" array");

    Scenario& sc = cfg.scenario;
    const auto base = path.parent_path();

    for (const auto& ja : j["agents"]) {
        check_keys(ja,
                   {"id", "static", "state", "states", "neighbors", "continuous", "discrete",
                    "u_lower", "u_upper", "w", "load", "init_lower", "init_upper", "networks",
                    "reference", "comment"},
                   "agent");
        AgentModel a;
        if (!ja.contains("id")) throw ParseError("agent without \"id\"");
        a.id = ja["id"].get<int>();
        const std::string where = "agent " + std::to_string(a.id);
        a.is_static = ja.value("static", false);

        if (a.is_static) {
            if (ja.contains("state"))
                a.static_states = {parse_vec(ja["state"], where + ".state")};
            else if (ja.contains("states")) {
                for (const auto& st : ja["states"])
                    a.static_states.push_back(parse_vec(st, where + ".states"));
            } else {
                throw ParseError(where + ": static agent needs \"state\" or \"states\"");
            }
            sc.graph.agents.push_back(std::move(a));
            continue;
        }

        const bool has_ct = ja.contains("continuous");
        const bool has_dt = ja.contains("discrete");
        if (has_ct == has_dt)
            throw ParseError(where + ": exactly one of \"continuous\" or \"discrete\" required");

        Mat L;  // discretized exogenous map, for the "load" sequence
        if (has_ct) {
            const json& jc = ja["continuous"];
            check_keys(jc, {"A_self", "A_neighbors", "B", "L", "period"}, where + ".continuous");
            CtModel ct;
            ct.A_self = parse_mat(jc.at("A_self"), where + ".A_self");
            if (jc.contains("A_neighbors"))
                ct.A_neighbors = parse_neighbor_mats(jc["A_neighbors"], where + ".A_neighbors");
            ct.B = jc.contains("B") ? parse_mat(jc["B"], where + ".B")
                                    : Mat::Zero(ct.A_self.rows(), 0);
            ct.L = jc.contains("L") ? parse_mat(jc["L"], where + ".L")
                                    : Mat::Zero(ct.A_self.rows(), 0);
            if (!jc.contains("period")) throw ParseError(where + ": continuous model needs period");
            ct.period = jc["period"].get<double>();
            DiscretizedModel dm = zoh_discretize(ct);
            a.A_self = dm.A_self;
            a.A_neighbors = dm.A_neighbors;
            a.B = dm.B;
            L = dm.L;
        } else {
            const json& jd = ja["discrete"];
            check_keys(jd, {"A_self", "A_neighbors", "B", "L"}, where + ".discrete");
            a.A_self = parse_mat(jd.at("A_self"), where + ".A_self");
            if (jd.contains("A_neighbors"))
                a.A_neighbors = parse_neighbor_mats(jd["A_neighbors"], where + ".A_neighbors");
            a.B = jd.contains("B") ? parse_mat(jd["B"], where + ".B")
                                   : Mat::Zero(a.A_self.rows(), 0);
            if (jd.contains("L")) L = parse_mat(jd["L"], where + ".L");
        }

        if (ja.contains("neighbors")) {
            // Optional cross-check of the neighbor id list.
            std::vector<int> listed;
            for (const auto& n : ja["neighbors"]) listed.push_back(n.get<int>());
            std::sort(listed.begin(), listed.end());
            std::vector<int> have;
            for (const auto& [jid, m] : a.A_neighbors) have.push_back(jid);
            if (listed != have)
                throw ParseError(where + ": \"neighbors\" differs from A_neighbors keys");
        }

        if (!ja.contains("u_lower") || !ja.contains("u_upper"))
            throw ParseError(where + ": needs u_lower and u_upper");
        a.u_lower = parse_vec(ja["u_lower"], where + ".u_lower");
        a.u_upper = parse_vec(ja["u_upper"], where + ".u_upper");

        if (ja.contains("w"))
            for (const auto& wk : ja["w"]) a.w_seq.push_back(parse_vec(wk, where + ".w"));
        if (ja.contains("load")) {
            if (L.cols() == 0) throw ParseError(where + ": \"load\" given but no L matrix");
            std::vector<Vec> loads;
            for (const auto& lk : ja["load"]) {
                Vec v = lk.is_number() ? Vec::Constant(1, lk.get<double>())
                                       : parse_vec(lk, where + ".load");
                if (v.size() != L.cols())
                    throw ParseError(where + ": load entry width != L columns");
                loads.push_back(v);
            }
            if (a.w_seq.empty()) a.w_seq.assign(loads.size(), Vec::Zero(a.A_self.rows()));
            if (a.w_seq.size() < loads.size())
                throw ParseError(where + ": w shorter than load sequence");
            for (size_t k = 0; k < loads.size(); ++k) a.w_seq[k] += L * loads[k];
        }

        if (!ja.contains("init_lower") || !ja.contains("init_upper"))
            throw ParseError(where + ": needs init_lower and init_upper");
        sc.init[a.id] = Box(parse_vec(ja["init_lower"], where + ".init_lower"),
                            parse_vec(ja["init_upper"], where + ".init_upper"));

        if (ja.contains("reference"))
            sc.reference[a.id] = parse_vec(ja["reference"], where + ".reference");

        if (!ja.contains("networks"))
            throw ParseError(where + ": needs a \"networks\" map");
        for (auto it = ja["networks"].begin(); it != ja["networks"].end(); ++it) {
            const int jid = std::stoi(it.key());
            const std::string rel = it.value().get<std::string>();
            const auto wpath = base / rel;
            cfg.weight_files[{a.id, jid}] = rel;
            sc.nets[{a.id, jid}] = load_weights(wpath);
        }

        sc.graph.agents.push_back(std::move(a));
    }

    if (j.contains("uncertainty")) {
        const json& ju = j["uncertainty"];
        check_keys(ju, {"delta", "A_vertices", "B_vertices"}, "uncertainty");
        UncertaintySpec u;
        if (ju.contains("delta")) {
            const double delta = ju["delta"].get<double>();
            if (delta < 0) throw ParseError("uncertainty.delta must be >= 0");
            for (const auto& a : sc.graph.agents) {
                if (a.is_static) continue;
                u.A_vertices[a.id] = {(1.0 - delta) * a.A_self, (1.0 + delta) * a.A_self};
                u.B_vertices[a.id] = {(1.0 - delta) * a.B, (1.0 + delta) * a.B};
            }
        }
        if (ju.contains("A_vertices"))
            for (auto it = ju["A_vertices"].begin(); it != ju["A_vertices"].end(); ++it) {
                std::vector<Mat> verts;
                for (const auto& v : it.value()) verts.push_back(parse_mat(v, "A_vertices"));
                u.A_vertices[std::stoi(it.key())] = std::move(verts);
            }
        if (ju.contains("B_vertices"))
            for (auto it = ju["B_vertices"].begin(); it != ju["B_vertices"].end(); ++it) {
                std::vector<Mat> verts;
                for (const auto& v : it.value()) verts.push_back(parse_mat(v, "B_vertices"));
                u.B_vertices[std::stoi(it.key())] = std::move(verts);
            }
        sc.uncertainty = std::move(u);
    }

    auto issues = validate_scenario(cfg.scenario);
    if (!issues.empty()) throw ScenarioError(std::move(issues));
    return cfg;
}

void save_result(const ReachResult& result, const RunConfig& cfg,
                 const std::filesystem::path& path) {
    json j;
    j["tool"] = "mareach";
    j["version"] = tool_version();
    j["config_hash"] = cfg.config_hash;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;
    j["mode"] = result.mode;
    j["horizon"] = cfg.horizon;
    j["solver"] = {{"tol", cfg.sdp.tol},
                   {"cert_tol", cfg.sdp.cert_tol},
                   {"max_iters", cfg.sdp.max_iters},
                   {"prescale", cfg.sdp.prescale}};
    j["agents"] = json::array();
    for (const auto& [id, boxes] : result.boxes) {
        json ja;
        ja["id"] = id;
        ja["static"] = cfg.scenario.graph.agent(id).is_static;
        ja["boxes"] = json::array();
        for (const Box& b : boxes)
            ja["boxes"].push_back({{"lower", vec_json(b.lower)}, {"upper", vec_json(b.upper)}});
        j["agents"].push_back(std::move(ja));
    }
    j["solves"] = json::array();
    for (const auto& rec : result.solves) {
        json js = {{"agent", rec.agent},
                   {"step", rec.step},
                   {"facet", rec.facet},
                   {"status", to_string(rec.report.status)},
                   {"iterations", rec.report.iterations},
                   {"wall_seconds", rec.report.wall_seconds},
                   {"max_residual_eig", rec.report.max_residual_eig}};
        if (rec.report.h_value) js["h"] = *rec.report.h_value;
        j["solves"].push_back(std::move(js));
    }
    j["warnings"] = result.warnings;
    j["total_seconds"] = result.total_seconds;
    j["sdp_seconds"] = result.sdp_seconds;

    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(1) << "\n";
}

LoadedResult load_result(const std::filesystem::path& path) {
    json j = read_json(path);
    LoadedResult res;
    res.mode = j.value("mode", "");
    res.config_hash = j.value("config_hash", "");
    res.seed = j.value("seed", std::uint64_t{0});
    res.horizon = j.value("horizon", 0);
    if (!j.contains("agents")) throw ParseError(path.string() + ": no agents in result");
    for (const auto& ja : j["agents"]) {
        const int id = ja["id"].get<int>();
        std::vector<Box> boxes;
        for (const auto& jb : ja["boxes"])
            boxes.emplace_back(parse_vec(jb["lower"], "lower"), parse_vec(jb["upper"], "upper"));
        res.boxes[id] = std::move(boxes);
    }
    return res;
}

void export_csv(const ReachResult& result, const Scenario& scenario,
                const std::filesystem::path& dir, int trajectory_samples, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    for (const auto& [id, boxes] : result.boxes) {
        std::ofstream out(dir / ("agent_" + std::to_string(id) + "_bounds.csv"));
        out << "step,coord,lower,upper\n";
        for (size_t k = 0; k < boxes.size(); ++k)
            for (int t = 0; t < boxes[k].dim(); ++t)
                out << k << "," << t << "," << boxes[k].lower[t] << "," << boxes[k].upper[t]
                    << "\n";
    }

    const int horizon = result.boxes.empty()
                            ? 0
                            : static_cast<int>(result.boxes.begin()->second.size()) - 1;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::map<int, std::ofstream> files;
    for (const auto& [id, boxes] : result.boxes) {
        files[id].open(dir / ("agent_" + std::to_string(id) + "_traj.csv"));
        files[id] << "sample,step,coord,value\n";
    }
    for (int sidx = 0; sidx < trajectory_samples; ++sidx) {
        std::map<int, Vec> x0;
        for (int id : scenario.verified_ids()) {
            const Box& b0 = scenario.init.at(id);
            Vec x(b0.dim());
            for (int t = 0; t < b0.dim(); ++t)
                x[t] = b0.lower[t] + unit(rng) * (b0.upper[t] - b0.lower[t]);
            x0[id] = x;
        }
        Trajectory traj = simulate(scenario, x0, horizon, scenario.uncertainty.has_value(),
                                   seed + static_cast<std::uint64_t>(sidx));
        for (auto& [id, steps] : traj) {
            auto it = files.find(id);
            if (it == files.end()) continue;
            for (size_t k = 0; k < steps.size(); ++k)
                for (int t = 0; t < steps[k].size(); ++t)
                    it->second << sidx << "," << k << "," << t << "," << steps[k][t] << "\n";
        }
    }
}

}  // namespace mareach
