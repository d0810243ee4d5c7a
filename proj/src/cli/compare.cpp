#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "osw/cli.hpp"
#include "osw/optimizer.hpp"
#include "osw/robustness.hpp"

namespace osw::cli {
namespace {

struct MissingRun {
    std::string name;
};

class Results {
  public:
    explicit Results(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const Table& get(const std::string& name) {
        auto it = cache_.find(name);
        if (it != cache_.end()) return it->second;
        const auto path = dir_ / (name + ".csv");
        if (!std::filesystem::exists(path)) throw MissingRun{name};
        return cache_.emplace(name, read_table(path)).first->second;
    }

  private:
    std::filesystem::path dir_;
    std::map<std::string, Table> cache_;
};

// Row whose `key` column equals `value` to 1e-9 relative.
const std::vector<double>& row_at(const Table& t, const std::string& key, double value) {
    const std::size_t c = t.column(key);
    for (const auto& row : t.rows) {
        if (std::abs(row[c] - value) <= 1e-9 * std::max(1.0, std::abs(value)) ||
            std::abs(row[c] - value) <= 1e-9 * std::abs(value)) {
            return row;
        }
    }
    throw std::out_of_range("no row with " + key + " = " + format_number(value));
}

double cell(const Table& t, const std::string& key, double value, const std::string& column) {
    return row_at(t, key, value)[t.column(column)];
}

// Largest value of `column` over rows with |key| <= bound.
double max_within(const Table& t, const std::string& key, double bound, const std::string& column) {
    const std::size_t k = t.column(key);
    const std::size_t c = t.column(column);
    double m = -INFINITY;
    for (const auto& row : t.rows) {
        if (std::abs(row[k]) <= bound + 1e-12) m = std::max(m, row[c]);
    }
    return m;
}

double max_at_abs(const Table& t, const std::string& key, double value, const std::string& column) {
    return std::max(cell(t, key, value, column), cell(t, key, -value, column));
}

SweepResult as_sweep(const Table& t) {
    SweepResult s;
    s.parameter_name = "kx_rad";
    s.parameter_values = t.values("kx_rad");
    s.mean_infidelity = t.values("infidelity");
    return s;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

class Checker {
  public:
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        ok = ok && cond;
        detail += (detail.empty() ? "" : "; ") + what + (cond ? "" : " [FAIL]");
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

using Evaluator = std::function<void(Results&, Checker&)>;

struct Criterion {
    std::string id;
    std::string title;
    Evaluator eval;
};

constexpr double kPi = 3.14159265358979323846;

std::vector<Criterion> criteria() {
    std::vector<Criterion> list;

    list.push_back({"1", "static local-phase sweep at |kx| = 0.5", [](Results& r, Checker& c) {
                        const double otw = max_at_abs(r.get("phase_otw1"), "kx_rad", 0.5, "infidelity");
                        const double osw = max_at_abs(r.get("phase_osw1"), "kx_rad", 0.5, "infidelity");
                        const double bb1 = max_at_abs(r.get("phase_osw_bb1"), "kx_rad", 0.5, "infidelity");
                        c.expect(otw > 0.1, "OTW1 " + fmt(otw) + " > 0.1");
                        c.expect(std::abs(osw - 0.01) <= 0.2 * 0.01, "OSW1 " + fmt(osw) + " = 0.01 +- 20%");
                        c.expect(bb1 < 1e-5, "OSW_BB1 " + fmt(bb1) + " < 1e-5");
                    }});

    list.push_back({"2", "error-scaling exponents", [](Results& r, Checker& c) {
                        const double otw = fit_error_order(as_sweep(r.get("phase_otw1")), 0.05, 0.2);
                        const double osw = fit_error_order(as_sweep(r.get("phase_osw1")), 0.05, 0.2);
                        const double bb1 = fit_error_order(as_sweep(r.get("phase_osw_bb1")), 0.2, 0.5);
                        c.expect(std::abs(otw - 2.0) <= 0.1, "OTW1 slope " + fmt(otw) + " = 2 +- 0.1");
                        c.expect(std::abs(osw - 4.0) <= 0.2, "OSW1 slope " + fmt(osw) + " = 4 +- 0.2");
                        c.expect(std::abs(bb1 - 12.0) <= 1.0, "OSW_BB1 slope " + fmt(bb1) + " = 12 +- 1");
                    }});

    auto ratio_at = [](Results& r, Checker& c, double T, double lo, double hi) {
        const double otw = cell(r.get("motion_otw1"), "gate_time_s", T, "mean_infidelity");
        const double osw = cell(r.get("motion_osw1"), "gate_time_s", T, "mean_infidelity");
        const double se_otw = cell(r.get("motion_otw1"), "gate_time_s", T, "std_error");
        const double se_osw = cell(r.get("motion_osw1"), "gate_time_s", T, "std_error");
        const double ratio = otw / osw;
        const double rel = std::hypot(se_otw / otw, se_osw / osw);
        c.expect(ratio >= lo && ratio <= hi, "OTW1/OSW1 = " + fmt(ratio) + " (+- " + fmt(rel * ratio) + " MC) in [" +
                                                 fmt(lo) + ", " + fmt(hi) + "]");
    };
    list.push_back({"3a", "motional ensemble ratio at T = 0.3 tau",
                    [ratio_at](Results& r, Checker& c) { ratio_at(r, c, 3e-6, 15.0, 60.0); }});
    list.push_back({"3b", "motional ensemble ratio at T = 2 tau",
                    [ratio_at](Results& r, Checker& c) { ratio_at(r, c, 20e-6, 1.3, 3.0); }});
    list.push_back({"3c", "fast-gate endpoints within 30%", [](Results& r, Checker& c) {
                        auto endpoint = [&](const char* file, const char* label, double T, double expected) {
                            const double m = cell(r.get(file), "gate_time_s", T, "mean_infidelity");
                            const double se = cell(r.get(file), "gate_time_s", T, "std_error");
                            c.expect(std::abs(m - expected) <= 0.3 * expected,
                                     std::string(label) + " @ " + fmt(T * 1e6) + " us: " + fmt(m) + " +- " + fmt(se) +
                                         " vs " + fmt(expected));
                        };
                        endpoint("motion_otw1", "OTW1", 2.0e-6, 0.032);
                        endpoint("motion_osw1", "OSW1", 1.4e-6, 0.0014);
                        endpoint("motion_osw_bb1", "OSW_BB1", 8.8e-6, 0.018);
                        const auto& bb1 = r.get("motion_osw_bb1");
                        try {
                            c.note("info: OSW_BB1 @ 8 us (peak-power limited time) " +
                                   fmt(cell(bb1, "gate_time_s", 8.0e-6, "mean_infidelity")));
                        } catch (const std::out_of_range&) {
                        }
                    }});

    list.push_back({"4", "OSW1 ensemble shape at T = tau", [](Results& r, Checker& c) {
                        const auto& row = row_at(r.get("motion_osw1"), "gate_time_s", 10e-6);
                        const auto& t = r.get("motion_osw1");
                        const double mean = row[t.column("mean_infidelity")];
                        const double median = row[t.column("median_infidelity")];
                        const double sd = row[t.column("std_infidelity")];
                        c.expect(mean / median >= 3.2 && mean / median <= 4.2, "mean/median " + fmt(mean / median) + " in [3.2, 4.2]");
                        c.expect(sd / mean >= 2.5 && sd / mean <= 3.5, "std/mean " + fmt(sd / mean) + " in [2.5, 3.5]");
                    }});

    list.push_back({"5", "light-shift gates: target fidelity and non-target identity", [](Results& r, Checker& c) {
                        for (const char* g : {"ls1", "ls2"}) {
                            const std::string name = std::string("noise_") + g + "_freq_target";
                            const double eps = cell(r.get(name), "sigma", 0.0, "mean_infidelity");
                            c.expect(eps <= 1e-5, std::string(g) + " target infidelity " + fmt(eps) + " <= 1e-5");
                            const auto& nt = r.get(std::string("noise_") + g + "_rabi_non_target");
                            const auto v = nt.values("mean_infidelity");
                            const double worst = *std::max_element(v.begin(), v.end());
                            c.expect(worst < 1e-10, std::string(g) + " non-target " + fmt(worst) + " < 1e-10");
                        }
                    }});

    list.push_back({"6", "noise sweeps at sigma = 2%", [](Results& r, Checker& c) {
                        const double rabi = cell(r.get("noise_ls2_rabi_target"), "sigma", 0.02, "mean_infidelity");
                        const double freq2 = cell(r.get("noise_ls2_freq_target"), "sigma", 0.02, "mean_infidelity");
                        const double freq1 = cell(r.get("noise_ls1_freq_target"), "sigma", 0.02, "mean_infidelity");
                        const auto nt = r.get("noise_ls2_rabi_non_target").values("mean_infidelity");
                        const double nt_worst = *std::max_element(nt.begin(), nt.end());
                        c.expect(rabi < 1e-4, "LS2 target Rabi " + fmt(rabi) + " < 1e-4");
                        c.expect(freq2 < 1e-6, "LS2 target frequency " + fmt(freq2) + " < 1e-6");
                        c.expect(nt_worst < 1e-9, "LS2 non-target Rabi " + fmt(nt_worst) + " < 1e-9");
                        c.expect(freq1 >= 10.0 * freq2, "LS1/LS2 frequency ratio " + fmt(freq1 / freq2) + " >= 10");
                    }});

    list.push_back({"7", "Magnus diagnostics", [](Results& r, Checker& c) {
                        const json& ls1 = r.get("magnus_ls1").metadata.at("results");
                        const json& ls2 = r.get("magnus_ls2").metadata.at("results");
                        const double T1 = r.get("magnus_ls1").metadata.at("config").at("duration_s").get<double>();
                        const double T2 = r.get("magnus_ls2").metadata.at("config").at("duration_s").get<double>();
                        // Areas below this are roundoff.
                        auto max_area = [](const json& res, double T) {
                            double m = 0.0;
                            for (const auto& [k, v] : res.at("projected_areas").items()) m = std::max(m, std::abs(v.get<double>()));
                            return m < 1e-12 * T * T ? 0.0 : m;
                        };
                        const double a1 = max_area(ls1, T1);
                        const double a2 = max_area(ls2, T2);
                        c.expect(ls2.at("m1_norm_over_T").get<double>() < 1e-3,
                                 "LS2 m1/T " + fmt(ls2.at("m1_norm_over_T").get<double>()) + " < 1e-3");
                        c.expect(a2 < 1e-3 * T2 * T2, "LS2 max|area| " + fmt(a2) + " < 1e-3 T^2");
                        c.expect(ls1.at("m1_norm_over_T").get<double>() < 1e-3,
                                 "LS1 m1/T " + fmt(ls1.at("m1_norm_over_T").get<double>()) + " < 1e-3");
                        c.expect(a1 > 10.0 * a2 && a1 > 0.0, "LS1 max|area| " + fmt(a1) + " > 10 x LS2 " + fmt(a2));
                        const json& checks = ls1.at("perturbation_check");
                        if (checks.empty()) throw std::out_of_range("magnus_ls1 has no perturbation_check entries");
                        double worst = 0.0;
                        for (const auto& p : checks) {
                            const double d = p.at("direct").get<double>();
                            const double e = p.at("predicted").get<double>();
                            worst = std::max(worst, std::abs(d - e) / e);
                        }
                        c.expect(worst <= 0.1, "LS1 perturbative oracle worst rel. error " + fmt(worst) + " <= 10%");
                    }});

    list.push_back({"8", "intensity imbalance d = 0.2", [](Results& r, Checker& c) {
                        const auto& osw = r.get("imbalance_osw1");
                        const auto& bb1 = r.get("imbalance_osw_bb1");
                        const auto& otw = r.get("imbalance_otw1");
                        const double osw_imb = max_within(osw, "kx_rad", 0.5, "infidelity");
                        const double osw_bal = max_within(osw, "kx_rad", 0.5, "infidelity_balanced");
                        c.expect(std::abs(osw_imb - osw_bal) <= 0.1 * osw_bal,
                                 "OSW1 max " + fmt(osw_imb) + " vs balanced " + fmt(osw_bal) + " within 10%");
                        const double bb1_imb = max_within(bb1, "kx_rad", 0.5, "infidelity");
                        c.expect(osw_imb <= 1e-3, "OSW1 max over |kx|<=0.5 " + fmt(osw_imb) + " <= 1e-3");
                        c.expect(bb1_imb <= 1e-3, "OSW_BB1 max over |kx|<=0.5 " + fmt(bb1_imb) + " <= 1e-3");
                        const double osw_c = max_within(osw, "kx_rad", 0.1, "infidelity");
                        const double bb1_c = max_within(bb1, "kx_rad", 0.1, "infidelity");
                        c.expect(osw_c <= 1e-4 && bb1_c <= 1e-4,
                                 "near kx=0 (|kx|<=0.1) OSW1 " + fmt(osw_c) + ", OSW_BB1 " + fmt(bb1_c) + " <= 1e-4");
                        const double otw_edge = max_at_abs(otw, "kx_rad", 0.5, "infidelity");
                        const double osw_edge = std::max(max_at_abs(osw, "kx_rad", 0.5, "infidelity"),
                                                         max_at_abs(bb1, "kx_rad", 0.5, "infidelity"));
                        c.expect(otw_edge >= 10.0 * osw_edge,
                                 "OTW1 at |kx|=0.5 " + fmt(otw_edge) + " >= 10 x OSW " + fmt(osw_edge));
                    }});

    list.push_back({"9", "optimizer reproduces a second-order robust light-shift gate", [](Results& r, Checker& c) {
                        const auto& t = r.get("optimize_ls");
                        const json& res = t.metadata.at("results");
                        const json& cfg = t.metadata.at("config");
                        const auto conv = t.values("converged");
                        const auto n_conv = std::count(conv.begin(), conv.end(), 1.0);
                        c.expect(n_conv >= 1 && res.at("final_cost").get<double>() < 1e-4,
                                 std::to_string(n_conv) + "/" + std::to_string(conv.size()) + " restarts converged, best cost " +
                                     fmt(res.at("final_cost").get<double>()));
                        // Independent re-audit of the emitted pulse.
                        PulseBasisParams p{res.at("drive_coeffs").get<std::vector<double>>(),
                                           res.at("shift_coeffs").get<std::vector<double>>(),
                                           res.at("drive_phase_rad").get<double>()};
                        const double T = cfg.at("duration_s").get<double>();
                        const auto n = cfg.at("n_segments").get<std::size_t>();
                        const GateTarget g{cfg.at("theta_rad").get<double>(), cfg.at("phi_rad").get<double>()};
                        const auto controls = realize_controls(p, T, n);
                        const double F = fidelity(propagate(controls, DriveContext{}), target_unitary(g));
                        const auto d = magnus_diagnostics(controls);
                        double area = 0.0;
                        for (double a : d.projected_areas) area = std::max(area, std::abs(a));
                        c.expect(F > 1.0 - 1e-4, "audit fidelity 1-" + fmt(1.0 - F));
                        c.expect(d.m1_norm / T < 1e-4, "audit m1/T " + fmt(d.m1_norm / T) + " < 1e-4");
                        c.expect(area < 1e-3 * T * T, "audit max|area| " + fmt(area) + " < 1e-3 T^2");
                    }});
    return list;
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::not_run: return "NOT RUN";
    }
    return "?";
}

std::vector<CriterionReport> compare_figures(const std::filesystem::path& results_dir) {
    Results results(results_dir);
    std::vector<CriterionReport> report;
    for (const auto& crit : criteria()) {
        CriterionReport rep{crit.id, crit.title, Verdict::not_run, ""};
        Checker checker;
        try {
            crit.eval(results, checker);
            rep.verdict = checker.ok ? Verdict::pass : Verdict::fail;
            rep.detail = checker.detail;
        } catch (const MissingRun& m) {
            rep.detail = "missing run " + m.name;
        } catch (const std::exception& e) {
            rep.verdict = Verdict::fail;
            rep.detail = checker.detail + (checker.detail.empty() ? "" : "; ") + "error: " + e.what();
        }
        report.push_back(std::move(rep));
    }
    return report;
}

std::string format_report(const std::vector<CriterionReport>& report) {
    std::ostringstream os;
    for (const auto& r : report) {
        os << "[" << to_string(r.verdict) << "] " << r.id << " " << r.title;
        if (!r.detail.empty()) os << " :: " << r.detail;
        os << '\n';
    }
    return os.str();
}

}  // namespace osw::cli
