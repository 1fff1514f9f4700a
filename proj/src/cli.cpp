#include "isoplex/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "isoplex/parse.hpp"
#include "isoplex/random_poly.hpp"
#include "isoplex/topo.hpp"
#include "isoplex/verify.hpp"

namespace isoplex {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string text_key(const std::string& key) {
    if (key == "q_time") return "Q-time";
    std::string s = key;
    std::replace(s.begin(), s.end(), '_', ' ');
    return s;
}

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + scalar_text(x);
        return s;
    }
    return v.dump();
}

/// `key: value` lines; arrays of arrays get one line per entry.
std::string render_text(const Json& report) {
    std::ostringstream os;
    for (const auto& [key, v] : report.items()) {
        if (v.is_array() && !v.empty() && v.front().is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) os << text_key(key) << ' ' << i << ": " << scalar_text(v[i]) << '\n';
        } else {
            os << text_key(key) << ": " << scalar_text(v) << '\n';
        }
    }
    return os.str();
}

std::string render(const Json& report, bool json) { return json ? report.dump() + "\n" : render_text(report); }

double round_time(double t) { return std::round(t * 1e6) / 1e6; }

std::string guarantee(int m) {
    if (m == 1) return "isotopy: the PL variety is isotopic to the zero set";
    return "conditional: strong full rank is certified; isotopy for m > 1 relies on the conjecture that it implies full rank on the convex hull";
}

void add_topology(Json& report, const TopoReport& proj, const TopoReport& sphere) {
    report["components"] = proj.components;
    report["betti"] = proj.betti;
    report["component_betti"] = proj.component_betti;
    report["euler"] = proj.euler_betti;
    report["sphere_components"] = sphere.components;
    report["sphere_betti"] = sphere.betti;
}

PolySystem load_system(const std::string& path) { return read_system_file(path); }

/// Runs the loading step, mapping input problems to exit code 1.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const CertificateFormatError& e) {
        err << "malformed certificate: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_input_error;
}

struct CaseResult {
    SolveOutcome outcome;
    bool verified = false;
    VerifyReport verify;
    std::string certificate_text;
    std::optional<PLCellComplex> sphere;
    std::optional<TopoReport> proj_report;
    std::optional<TopoReport> sphere_report;
};

CaseResult run_case(const PolySystem& ps, const SolveParams& params, bool verify) {
    CaseResult r;
    r.outcome = solve(ps, params);
    if (r.outcome.status != SolveStatus::Certified) return r;
    std::vector<FaceCertificate> faces;
    for (const auto& [key, fc] : r.outcome.certificates) faces.push_back(fc);
    r.certificate_text = write_certificate(make_certificate(ps, r.outcome.dec, r.outcome.tilde, faces));
    if (verify) {
        const auto start = std::chrono::steady_clock::now();
        const Certificate parsed = parse_certificate(r.certificate_text);
        r.verify = check_certificate(ps, parsed, params.threads);
        r.verify.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.verified = true;
        if (!r.verify.accepted()) return r;
    }
    r.sphere = extract(r.outcome.dec, r.outcome.tilde, params.threads);
    r.sphere_report = analyze(*r.sphere);
    r.proj_report = analyze(projective_quotient(r.outcome.dec, *r.sphere));
    return r;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const PolySystem ps = load_system(cfg.input);
        const CaseResult r = run_case(ps, cfg.params, cfg.verify);
        const auto& st = r.outcome.stats;
        const fs::path dir(cfg.out_dir);
        fs::create_directories(dir);

        Json report;
        report["input"] = cfg.input;
        report["status"] = to_string(r.outcome.status);
        report["nvars"] = ps.nvars();
        report["m"] = ps.size();
        report["degrees"] = ps.degrees();
        int code = exit_ok;
        if (r.outcome.status != SolveStatus::Certified) {
            report["failing_faces"] = r.outcome.failed.size();
            code = exit_budget_exhausted;
        } else {
            write_file(dir / "certificate.txt", r.certificate_text);
            if (!r.verified) {
                report["verification"] = "UNVERIFIED";
            } else if (r.verify.accepted()) {
                report["verification"] = "accepted";
            } else {
                report["verification"] = "rejected";
                report["reject_face"] = face_key_string(r.verify.face);
                report["reject_path"] = r.verify.path;
                report["reject_reason"] = r.verify.reason;
                code = exit_rejected;
            }
            report["guarantee"] = (r.verified ? "" : "UNVERIFIED ") + guarantee(ps.size());
            if (r.proj_report) {
                add_topology(report, *r.proj_report, *r.sphere_report);
                const int top = r.sphere->top_dim();
                if (top == 1 || top == 2) {
                    export_off(*r.sphere, (dir / "variety.off").string());
                    report["mesh"] = (dir / "variety.off").string();
                }
            }
        }
        report["time"] = round_time(st.wall_time);
        report["q_time"] = r.verified ? Json(round_time(r.verify.wall_time)) : Json(nullptr);
        report["simplices"] = r.outcome.dec.cone_count() / 2;
        report["max_splits"] = st.max_depth;
        report["refinements"] = st.refinements;
        report["faces_tested"] = st.faces_tested;

        const std::string text = render(report, cfg.json);
        write_file(dir / "report.txt", text);
        out << text;
        return code;
    });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const PolySystem ps = load_system(cfg.input);
        const Certificate cert = read_certificate_file(cfg.certificate);
        const VerifyReport v = check_certificate(ps, cert, cfg.params.threads);
        Json report;
        report["verification"] = v.accepted() ? "accepted" : "rejected";
        if (!v.accepted()) {
            report["reject_face"] = face_key_string(v.face);
            report["reject_path"] = v.path;
            report["reject_reason"] = v.reason;
        } else {
            report["guarantee"] = guarantee(ps.size());
        }
        report["faces_checked"] = v.faces_checked;
        report["nodes_checked"] = v.nodes_checked;
        report["q_time"] = round_time(v.wall_time);
        out << render(report, cfg.json);
        return v.accepted() ? exit_ok : exit_rejected;
    });
}

int cmd_topo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const PolySystem ps = load_system(cfg.input);
        const Certificate cert = read_certificate_file(cfg.certificate);
        Json report;
        if (cfg.verify) {
            const VerifyReport v = check_certificate(ps, cert, cfg.params.threads);
            if (!v.accepted()) {
                report["verification"] = "rejected";
                report["reject_reason"] = v.reason;
                out << render(report, cfg.json);
                return static_cast<int>(exit_rejected);
            }
            report["verification"] = "accepted";
        } else {
            report["verification"] = "UNVERIFIED";
        }
        const auto [dec, tilde] = rebuild(cert);
        const PLCellComplex sphere = extract(dec, tilde, cfg.params.threads);
        add_topology(report, analyze(projective_quotient(dec, sphere)), analyze(sphere));
        report["pseudo_manifold"] = is_pseudo_manifold(sphere);
        if (!cfg.off_path.empty()) {
            export_off(sphere, cfg.off_path);
            report["mesh"] = cfg.off_path;
        }
        out << render(report, cfg.json);
        return static_cast<int>(exit_ok);
    });
}

namespace {

struct BenchCase {
    std::string name;
    PolySystem ps;
};

std::vector<BenchCase> bench_cases(const RunConfig& cfg) {
    std::vector<BenchCase> cases;
    for (const auto& path : cfg.inputs) cases.push_back({fs::path(path).stem().string(), load_system(path)});
    if (!cfg.random_spec.empty()) {
        const auto colon = cfg.random_spec.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--random expects <nvars>:<d1>,<d2>,...");
        const int nvars = std::stoi(cfg.random_spec.substr(0, colon));
        std::vector<int> degrees;
        std::stringstream ds(cfg.random_spec.substr(colon + 1));
        for (std::string tok; std::getline(ds, tok, ',');) degrees.push_back(std::stoi(tok));
        for (int i = 0; i < cfg.samples; ++i) {
            const std::uint64_t seed = cfg.params.seed + static_cast<std::uint64_t>(i);
            cases.push_back({"random-" + std::to_string(seed), random_bombieri_system(nvars, degrees, seed)});
        }
    }
    if (cases.empty()) throw std::invalid_argument("bench needs input files or --random");
    return cases;
}

struct Summary {
    double mean = 0, stdev = 0, max = 0;
};

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    if (xs.empty()) return s;
    for (double x : xs) {
        s.mean += x;
        s.max = std::max(s.max, x);
    }
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double var = 0;
        for (double x : xs) var += (x - s.mean) * (x - s.mean);
        s.stdev = std::sqrt(var / static_cast<double>(xs.size() - 1));
    }
    return s;
}

}  // namespace

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cases = bench_cases(cfg);
        std::vector<double> times, qtimes;
        if (!cfg.json)
            out << std::left << std::setw(22) << "case" << std::setw(18) << "status" << std::setw(11) << "time" << std::setw(11)
                << "Q-time" << std::setw(11) << "simplices" << std::setw(12) << "max-splits" << "components\n";
        bool all_ok = true;
        for (const auto& c : cases) {
            Json row;
            row["case"] = c.name;
            try {
                const CaseResult r = run_case(c.ps, cfg.params, cfg.verify);
                std::string status = to_string(r.outcome.status);
                if (r.verified && !r.verify.accepted()) status = "rejected";
                row["status"] = status;
                row["time"] = round_time(r.outcome.stats.wall_time);
                row["q_time"] = r.verified ? round_time(r.verify.wall_time) : 0.0;
                row["simplices"] = r.outcome.dec.cone_count() / 2;
                row["max_splits"] = r.outcome.stats.max_depth;
                row["components"] = r.proj_report ? Json(r.proj_report->components) : Json(nullptr);
                if (status == "certified") {
                    times.push_back(r.outcome.stats.wall_time);
                    if (r.verified) qtimes.push_back(r.verify.wall_time);
                } else {
                    all_ok = false;
                }
            } catch (const std::exception& e) {
                row["status"] = "error";
                row["error"] = e.what();
                all_ok = false;
            }
            if (cfg.json) {
                out << row.dump() << '\n';
            } else {
                auto cell = [&](const char* key) { return row.contains(key) ? scalar_text(row[key]) : std::string("-"); };
                out << std::left << std::setw(22) << c.name << std::setw(18) << cell("status") << std::setw(11) << cell("time")
                    << std::setw(11) << cell("q_time") << std::setw(11) << cell("simplices") << std::setw(12)
                    << cell("max_splits") << cell("components") << '\n';
                if (row.contains("error")) out << "  error: " << row["error"].get<std::string>() << '\n';
            }
        }
        const Summary t = summarize(times), q = summarize(qtimes);
        Json agg;
        agg["aggregate"] = true;
        agg["samples"] = times.size();
        agg["time_mean"] = round_time(t.mean);
        agg["time_stdev"] = round_time(t.stdev);
        agg["time_max"] = round_time(t.max);
        agg["q_time_mean"] = round_time(q.mean);
        agg["q_time_stdev"] = round_time(q.stdev);
        agg["q_time_max"] = round_time(q.max);
        if (cfg.json) {
            out << agg.dump() << '\n';
        } else {
            out << "samples " << times.size() << "  time mean " << t.mean << " stdev " << t.stdev << " max " << t.max
                << "  Q-time mean " << q.mean << " stdev " << q.stdev << " max " << q.max << '\n';
        }
        return static_cast<int>(all_ok ? exit_ok : exit_budget_exhausted);
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified piecewise-linear approximation of real projective varieties"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "text";
    bool no_verify = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--max-splits", cfg.params.max_splits, "Depth cap of each face's subdivision tree")->check(CLI::NonNegativeNumber);
        sub->add_option("--max-refinements", cfg.params.max_refinements, "Global refinement budget")->check(CLI::NonNegativeNumber);
        sub->add_option("--tol", cfg.params.tol, "Min-norm convergence tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--threads", cfg.params.threads, "Worker threads; 1 is serial, 0 lets OpenMP choose")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", cfg.params.seed, "Random seed");
        sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--no-verify", no_verify, "Skip the exact replay (report marked UNVERIFIED)");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Certify a system and write certificate, mesh and report");
    solve_cmd->add_option("input", cfg.input, "Polynomial file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", cfg.out_dir, "Output directory");
    add_common(solve_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Replay a certificate in exact arithmetic");
    verify_cmd->add_option("input", cfg.input, "Polynomial file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("certificate", cfg.certificate, "Certificate file")->required()->check(CLI::ExistingFile);
    add_common(verify_cmd);

    auto* topo_cmd = app.add_subcommand("topo", "Topology of a certified PL variety");
    topo_cmd->add_option("input", cfg.input, "Polynomial file")->required()->check(CLI::ExistingFile);
    topo_cmd->add_option("certificate", cfg.certificate, "Certificate file")->required()->check(CLI::ExistingFile);
    topo_cmd->add_option("--off", cfg.off_path, "Write the spherical complex as OFF");
    add_common(topo_cmd);

    auto* bench_cmd = app.add_subcommand("bench", "Timing table over input files or random Bombieri systems");
    bench_cmd->add_option("inputs", cfg.inputs, "Polynomial files")->check(CLI::ExistingFile);
    bench_cmd->add_option("--random", cfg.random_spec, "Random systems, <nvars>:<d1>,<d2>,...");
    bench_cmd->add_option("--samples", cfg.samples, "Random samples")->check(CLI::PositiveNumber);
    add_common(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }
    cfg.json = format == "json";
    cfg.verify = !no_verify;

    if (solve_cmd->parsed()) return cmd_solve(cfg, out, err);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out, err);
    if (topo_cmd->parsed()) return cmd_topo(cfg, out, err);
    return cmd_bench(cfg, out, err);
}

}  // namespace isoplex
