#include "worldtube/experiments.hpp"
#include "worldtube/invariants.hpp"
#include "worldtube/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace worldtube {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

namespace {

json vec(const FourVector& v)
{
    return json::array({v[0], v[1], v[2], v[3]});
}

class CsvWriter
{
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out(path)
    {
        if (!out) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
        out.flush();
    }

    void row(const std::vector<double>& values)
    {
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(format_double(v));
        row(cells);
    }

private:
    std::ofstream out;
};

void write_report(const fs::path& dir, const json& report)
{
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "report.json").string());
    out << report.dump(2) << '\n';
}

json base_report(const std::string& command, const ExperimentConfig& config)
{
    return {{"command", command}, {"config", to_json(config)}, {"seed", config.seed}, {"threads", thread_count()}};
}

// Runs body, recording a thrown error in the report before passing it on.
template <class Body>
RunResult guarded(const fs::path& dir, json report, Body&& body)
{
    fs::create_directories(dir);
    const auto start = std::chrono::steady_clock::now();
    try
    {
        RunResult r = body(report);
        report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.report = report;
        write_report(dir, report);
        return r;
    }
    catch (const std::exception& e)
    {
        report["status"] = "aborted";
        report["error"] = e.what();
        write_report(dir, report);
        throw;
    }
}

json record_json(const DifferenceRecord& rec)
{
    const double pred_norm = euclidean_norm(rec.predicted);
    // first-order propagation of both error estimates into the ratio
    const double ratio_error = pred_norm > 0.0 ? (rec.delta_error + std::abs(rec.ratio) * rec.predicted_error) / pred_norm
                                               : std::numeric_limits<double>::infinity();
    return {{"eps", rec.eps},
            {"charge", rec.charge},
            {"delta", vec(rec.delta)},
            {"delta_error", rec.delta_error},
            {"predicted", vec(rec.predicted)},
            {"predicted_error", rec.predicted_error},
            {"point_pairing_norm", rec.point_norm},
            {"ratio", rec.ratio},
            {"ratio_error", ratio_error},
            {"mismatch", rec.mismatch},
            {"verdict", to_string(rec.verdict)},
            {"seconds", rec.seconds}};
}

json test_json(const BumpTestFunction& phi, std::size_t index, double d0)
{
    const Event& c = phi.center();
    return {{"index", index},
            {"center", json::array({c[0], c[1], c[2], c[3]})},
            {"radius", phi.radius()},
            {"amplitude", phi.amplitude()},
            {"d0", d0}};
}

// slope and its standard error from the residuals of the log-log fit
std::pair<double, double> slope_with_error(const std::vector<double>& x, const std::vector<double>& y)
{
    const double slope = loglog_slope(x, y);
    const std::size_t n = x.size();
    if (n < 3) return {slope, std::numeric_limits<double>::infinity()};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += std::log(x[i]) / n;
        my += std::log(std::abs(y[i])) / n;
    }
    double sxx = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double dx = std::log(x[i]) - mx;
        const double r = std::log(std::abs(y[i])) - my - slope * dx;
        sxx += dx * dx;
        sse += r * r;
    }
    return {slope, std::sqrt(sse / double(n - 2) / sxx)};
}

} // namespace

RunResult run_verify(const ExperimentConfig& config, const fs::path& out_dir)
{
    return guarded(out_dir, base_report("verify", config), [&](json& report) {
        CsvWriter csv(out_dir / "results.csv", {"check", "criterion", "passed", "seconds"});
        const auto results = run_invariant_suites(config);
        bool all = true;
        report["checks"] = json::array();
        for (const CheckResult& r : results)
        {
            all = all && r.passed;
            report["checks"].push_back(to_json(r));
            csv.row(std::vector<std::string>{r.name, std::to_string(r.criterion), r.passed ? "true" : "false",
                                             format_double(r.seconds)});
        }
        report["passed"] = all;
        report["status"] = "completed";
        return RunResult{all ? 0 : 1, {}};
    });
}

RunResult run_compare(const ExperimentConfig& config, const fs::path& out_dir)
{
    return guarded(out_dir, base_report("compare", config), [&](json& report) {
        CsvWriter csv(out_dir / "results.csv", {"eps", "a_c", "delta_t", "delta_x", "delta_y", "delta_z", "pred_t",
                                                "pred_x", "pred_y", "pred_z", "ratio", "err_est"});
        const UniformWorldline center = config.center();
        const ShellConfig shell = config.shell_config();
        const VerdictOptions options = config.verdict_options();
        const auto tests = config.tests();

        report["test_functions"] = json::array();
        Verdict overall = Verdict::Equal;
        for (std::size_t i = 0; i < tests.size(); ++i)
        {
            const VerdictReport rep =
                verdict(center, shell.charge(), shell.eps(), {tests[i]}, {shell.eps()}, options);
            const TestFunctionVerdict& tf = rep.functions.front();
            const DifferenceRecord& rec = tf.records.front();
            csv.row(std::vector<double>{rec.eps, center.accel(), rec.delta[0], rec.delta[1], rec.delta[2],
                                        rec.delta[3], rec.predicted[0], rec.predicted[1], rec.predicted[2],
                                        rec.predicted[3], rec.ratio, rec.delta_error});
            json t = test_json(tests[i], i, tf.d0);
            t["record"] = record_json(rec);
            t["verdict"] = to_string(tf.verdict);
            t["integrand_timelike"] = tf.integrand_timelike;
            report["test_functions"].push_back(t);
            if (tf.verdict == Verdict::NotEqual) overall = Verdict::NotEqual;
        }
        report["verdict"] = to_string(overall);
        report["status"] = "completed";
        return RunResult{0, {}};
    });
}

RunResult run_sweep(const ExperimentConfig& config, const fs::path& out_dir)
{
    if (config.sweep.eps.size() < 3)
        throw ConfigError("sweep: at least three eps values are needed for a slope fit, got " +
                          std::to_string(config.sweep.eps.size()));
    return guarded(out_dir, base_report("sweep", config), [&](json& report) {
        CsvWriter csv(out_dir / "results.csv", {"eps", "norm_delta", "norm_pred", "ratio"});
        const UniformWorldline center = config.center();
        const ShellConfig shell = config.shell_config();
        const VerdictOptions options = config.verdict_options();
        const auto tests = config.tests();

        report["convention"] = to_string(config.sweep.convention);
        report["test_functions"] = json::array();
        for (std::size_t i = 0; i < tests.size(); ++i)
        {
            const double d0 = support_distance(center, tests[i]);
            std::vector<double> eps;
            for (double e : config.sweep.eps) eps.push_back(config.sweep.relative_to_d0 ? e * d0 : e);

            const VerdictReport rep = verdict(center, shell.charge(), shell.eps(), {tests[i]}, eps, options);
            const TestFunctionVerdict& tf = rep.functions.front();
            std::vector<double> xs, ys;
            json records = json::array();
            for (const DifferenceRecord& rec : tf.records)
            {
                csv.row(std::vector<double>{rec.eps, euclidean_norm(rec.delta), euclidean_norm(rec.predicted),
                                            rec.ratio});
                xs.push_back(rec.eps);
                ys.push_back(euclidean_norm(rec.delta));
                records.push_back(record_json(rec));
            }
            const auto [slope, slope_error] = slope_with_error(xs, ys);
            auto smallest = std::min_element(tf.records.begin(), tf.records.end(),
                                             [](const auto& a, const auto& b) { return a.eps < b.eps; });

            json t = test_json(tests[i], i, d0);
            t["records"] = records;
            t["slope"] = slope;
            t["slope_error"] = slope_error;
            t["slope_other_convention"] = tf.slope_other;
            t["smallest_eps"] = smallest->eps;
            t["smallest_eps_ratio"] = smallest->ratio;
            t["smallest_eps_mismatch"] = smallest->mismatch;
            t["verdict"] = to_string(tf.verdict);
            t["integrand_timelike"] = tf.integrand_timelike;
            report["test_functions"].push_back(t);
        }
        report["status"] = "completed";
        return RunResult{0, {}};
    });
}

} // namespace worldtube
