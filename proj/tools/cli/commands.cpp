#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/io.hpp"
#include "steinspc/calibrate.hpp"
#include "steinspc/designs.hpp"
#include "steinspc/errors.hpp"
#include "steinspc/phase1.hpp"
#include "steinspc/simrl.hpp"

namespace steinspc::cli {
namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct SimArgs
{
    std::uint64_t reps = 10000;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    std::optional<count_t> max_t;
};

struct ChartArgs
{
    std::string chart;
    std::string weight;
    std::string weight_table;
    double lambda = 0.1;
    std::optional<double> mu0;
    std::optional<double> limit;
    std::optional<count_t> threshold;
    std::optional<count_t> truncation_m;
    double tail_tol = 1e-10;
};

struct CalibrateArgs
{
    ChartArgs chart;
    SimArgs sim;
    double target = kDefaultTargetArl;
    std::vector<double> bracket;
    double rel_tol = 0.01;
    std::string out;
};

struct TableArgs
{
    int table = 1;
    std::vector<double> mu0s{2.0, 5.0};
    SimArgs sim;
    count_t tau = kTableTau;
    std::string csv;
    std::string json;
};

struct MonitorArgs
{
    std::string counts;
    std::string design;
    ChartArgs chart;
    std::size_t skip = 0;
    std::string out;
    std::string svg;
    std::string json;
    std::optional<std::uint64_t> seed;
};

struct Phase1Args
{
    std::string counts;
    std::optional<std::size_t> t0;
    std::size_t max_lag = 20;
    double alpha = 0.01;
    std::string out;
    std::optional<std::uint64_t> seed;
};

struct ArlArgs
{
    ChartArgs chart;
    SimArgs sim;
    std::string family = "poisson";
    std::optional<double> mu;
    double disp = 1.0;
    count_t tau = 1;
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag)
{
    if (flag)
        return *flag;
    if (char const* env = std::getenv("STEIN_SPC_SEED"))
    {
        std::string_view s(env);
        std::uint64_t v = 0;
        auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
        {
            throw ParameterError("STEIN_SPC_SEED must be an unsigned integer, got '"
                                 + std::string(s) + "'");
        }
        return v;
    }
    return kDefaultSeed;
}

SimOptions make_sim(SimArgs const& a, double target_arl = kDefaultTargetArl)
{
    SimOptions o;
    o.reps = a.reps;
    o.seed = resolve_seed(a.seed);
    o.workers = a.workers;
    o.max_t = a.max_t ? *a.max_t : static_cast<count_t>(std::ceil(100.0 * target_arl));
    return o;
}

void add_chart_options(CLI::App* app, ChartArgs& a, bool need_limit)
{
    app->add_option("--chart", a.chart, "Chart kind: c, ewma, ab, abc")->required();
    app->add_option("--weight", a.weight, "Stein weight: one, abslinear, absroot, log");
    app->add_option("--weight-table", a.weight_table,
                    "File with custom weights f(0..M), one per line");
    app->add_option("--lambda", a.lambda, "Smoothing parameter")->capture_default_str();
    app->add_option("--mu0", a.mu0, "In-control Poisson mean")->required();
    if (need_limit)
    {
        app->add_option("--L", a.limit, "Limit half-width (EWMA/AB/ABC)");
        app->add_option("--threshold", a.threshold, "c-chart alarm threshold (x >= threshold)");
    }
    app->add_option("--truncation-m", a.truncation_m,
                    "Fixed truncation index for the Stein moments (e.g. 50)");
    app->add_option("--tail-tol", a.tail_tol, "Poisson tail tolerance for adaptive truncation")
        ->capture_default_str();
}

void add_sim_options(CLI::App* app, SimArgs& a)
{
    app->add_option("--reps", a.reps, "Monte Carlo replications")->capture_default_str();
    app->add_option("--seed", a.seed, "Master seed (default: $STEIN_SPC_SEED, else 1)");
    app->add_option("--workers", a.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
    app->add_option("--max-t", a.max_t, "Run-length cap (default 100 x target ARL)");
}

DesignRecord record_from(ChartArgs const& a, bool need_limit)
{
    DesignRecord r;
    r.kind = parse_chart_kind(a.chart);
    r.mu0 = *a.mu0;
    r.lambda = a.lambda;
    r.truncation_m = a.truncation_m;
    r.tail_tol = a.tail_tol;
    if (r.kind == ChartKind::AbEwma || r.kind == ChartKind::AbcEwma)
    {
        if (!a.weight_table.empty())
        {
            r.weight = "table";
            r.weight_table = read_weight_table_file(a.weight_table);
        }
        else
        {
            r.weight = WeightFunction::parse(a.weight.empty() ? "abslinear" : a.weight).name();
        }
    }
    else
    {
        r.weight = "one";
    }
    if (need_limit)
    {
        if (r.kind == ChartKind::CChart)
        {
            if (!a.threshold)
                throw ParameterError("c-chart needs --threshold");
            r.threshold = *a.threshold;
        }
        else
        {
            if (!a.limit)
                throw ParameterError("chart needs --L");
            r.limit = *a.limit;
        }
    }
    return r;
}

void write_file(std::string const& path, std::string const& content)
{
    std::ofstream f(path);
    if (!f || !(f << content))
    {
        throw InputError("cannot write file '" + path + "'");
    }
}

std::string num(double v, int precision = 1)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

int cmd_calibrate(CalibrateArgs const& a, std::ostream& out)
{
    DesignRecord r = record_from(a.chart, false);
    r.target_arl = a.target;
    nlohmann::json j;
    if (r.kind == ChartKind::CChart)
    {
        auto const d = c_chart_design(r.mu0, a.target);
        r.threshold = d.threshold;
        r.achieved_arl = d.achieved_arl;
        j = to_json(r);
        j["neighbors"] = {
            {{"threshold", d.below_threshold}, {"arl", d.below_arl}},
            {{"threshold", d.above_threshold}, {"arl", d.above_arl}},
        };
    }
    else
    {
        CalibrationOptions opts;
        opts.target_arl = a.target;
        opts.sim = make_sim(a.sim, a.target);
        opts.rel_tol = a.rel_tol;
        if (!a.bracket.empty())
        {
            if (a.bracket.size() != 2)
                throw ParameterError("--bracket takes two values");
            opts.bracket = std::pair{a.bracket[0], a.bracket[1]};
        }
        auto const result = find_limit(r.to_spec(), CountModel::poisson(r.mu0), opts);
        r.limit = result.limit;
        r.achieved_arl = result.achieved.mean;
        r.se = result.achieved.se;
        r.reps = opts.sim.reps;
        r.seed = opts.sim.seed;
        j = to_json(r);
        j["reps_censored"] = result.achieved.reps_censored;
        j["bracket"] = {result.bracket_lo, result.bracket_hi};
        j["evaluations"] = result.evaluations;
    }
    auto const text = j.dump(2) + "\n";
    out << text;
    if (!a.out.empty())
        write_file(a.out, text);
    return kExitOk;
}

void print_table(std::ostream& out,
                 std::vector<GridEntry> const& grid,
                 std::vector<CellOutcome> const& outcomes)
{
    // Blocks of 9 cells per design: 3 families x 3 shifts.
    for (std::size_t i = 0; i < grid.size(); i += 9)
    {
        auto const& d = grid[i].design;
        auto weight = to_string(d.kind) == std::string_view("ewma")
                          ? std::string{}
                          : " " + grid[i].cell.spec.weight().name();
        out << "mu0=" << num(d.mu0, 0) << "  " << to_string(d.kind) << weight
            << "  L=" << format_double(d.limit) << "\n";
        out << "  family      mu0-0.25        mu0    mu0+0.25\n";
        for (std::size_t f = 0; f < 3; ++f)
        {
            out << "  " << std::left << std::setw(8) << to_string(grid[i + 3 * f].family)
                << std::right;
            for (std::size_t s = 0; s < 3; ++s)
            {
                auto const& o = outcomes[i + 3 * f + s];
                out << std::setw(12) << (o.stats ? num(o.stats->mean) : std::string("error"));
            }
            out << "\n";
        }
    }
}

int cmd_table(TableArgs const& a, std::ostream& out)
{
    if (a.table != 1 && a.table != 2)
        throw ParameterError("--table must be 1 or 2");
    auto const measure = a.table == 1 ? TableMeasure::ZeroState : TableMeasure::Ced;
    auto const grid = reference_grid(measure, a.mu0s, a.tau);
    std::vector<TableCell> cells;
    cells.reserve(grid.size());
    for (auto const& g : grid)
        cells.push_back(g.cell);
    auto const opts = make_sim(a.sim);
    auto const outcomes = run_table(cells, opts);

    std::string const measure_name = a.table == 1 ? "zero_state_arl" : "ced";
    count_t const tau = a.table == 1 ? 1 : a.tau;
    std::ostringstream csv;
    csv << "table,measure,tau,mu0,chart,weight,L,family,mu,disp,shift,mean,se,reps_used,"
           "reps_discarded,reps_censored,error\n";
    nlohmann::json j;
    j["schema"] = kSchema;
    j["record"] = "table";
    j["table"] = a.table;
    j["measure"] = measure_name;
    j["tau"] = tau;
    j["reps"] = opts.reps;
    j["seed"] = opts.seed;
    j["max_t"] = opts.max_t;
    auto cells_json = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        auto const& g = grid[i];
        auto const& o = outcomes[i];
        std::string const weight = g.design.kind == ChartKind::Ewma
                                       ? std::string("one")
                                       : g.cell.spec.weight().name();
        csv << a.table << ',' << measure_name << ',' << tau << ',' << format_double(g.design.mu0)
            << ',' << to_string(g.design.kind) << ',' << weight << ','
            << format_double(g.design.limit) << ',' << to_string(g.family) << ','
            << format_double(g.mu) << ',' << format_double(g.disp) << ','
            << format_double(g.shift) << ',';
        nlohmann::json cj = {{"cell_id", g.cell.cell_id},
                             {"mu0", g.design.mu0},
                             {"chart", std::string(to_string(g.design.kind))},
                             {"weight", weight},
                             {"L", g.design.limit},
                             {"family", std::string(to_string(g.family))},
                             {"mu", g.mu},
                             {"disp", g.disp},
                             {"shift", g.shift}};
        if (o.stats)
        {
            auto const& s = *o.stats;
            csv << format_double(s.mean) << ',' << (std::isfinite(s.se) ? format_double(s.se) : "")
                << ',' << s.reps_used << ',' << s.reps_discarded << ',' << s.reps_censored << ",\n";
            cj["stats"] = to_json(s);
            cj["error"] = nullptr;
        }
        else
        {
            csv << ",,,,,\"" << o.error << "\"\n";
            cj["stats"] = nullptr;
            cj["error"] = o.error;
        }
        cells_json.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells_json);

    print_table(out, grid, outcomes);
    if (!a.csv.empty())
        write_file(a.csv, csv.str());
    if (!a.json.empty())
        write_file(a.json, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_monitor(MonitorArgs const& a, std::ostream& out)
{
    auto counts = read_counts_file(a.counts);
    if (a.skip >= counts.size())
        throw InputError(a.counts + ": --skip leaves no observations");
    std::vector<count_t> series(counts.begin() + static_cast<std::ptrdiff_t>(a.skip), counts.end());

    DesignRecord record;
    if (!a.design.empty())
    {
        record = read_design_file(a.design);
    }
    else
    {
        if (a.chart.chart.empty() || !a.chart.mu0)
            throw ParameterError("monitor needs --design or --chart and --mu0");
        record = record_from(a.chart, true);
    }
    ChartSpec spec = [&] {
        if (a.design.empty())
            return record.to_spec();
        try
        {
            return record.to_spec();
        }
        catch (SpecError const& e)
        {
            throw InputError(a.design + ": " + e.what());
        }
    }();

    auto const result = monitor_series(spec, series);
    std::size_t const n_alarms
        = static_cast<std::size_t>(std::count(result.alarms.begin(), result.alarms.end(), true));
    out << "observations: " << series.size() << "\n";
    out << "first_alarm: " << (result.first_alarm ? std::to_string(*result.first_alarm) : "none")
        << "\n";
    out << "alarms: " << n_alarms << "\n";

    if (!a.out.empty())
    {
        std::ostringstream csv;
        write_trajectory_csv(csv, spec, series, result);
        write_file(a.out, csv.str());
    }
    if (!a.svg.empty())
        write_file(a.svg, render_svg(spec, series, result));
    if (!a.json.empty())
    {
        nlohmann::json j;
        j["schema"] = kSchema;
        j["record"] = "monitor";
        j["design"] = to_json(record);
        j["observations"] = series.size();
        j["first_alarm"] = result.first_alarm ? nlohmann::json(*result.first_alarm) : nullptr;
        auto alarms = nlohmann::json::array();
        for (std::size_t i = 0; i < result.alarms.size(); ++i)
        {
            if (result.alarms[i])
                alarms.push_back(i + 1);
        }
        j["alarm_times"] = alarms;
        write_file(a.json, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_phase1(Phase1Args const& a, std::ostream& out, std::ostream& err)
{
    auto data = read_counts_file(a.counts);
    if (a.t0)
    {
        if (*a.t0 < 2 || *a.t0 > data.size())
            throw InputError(a.counts + ": --t0 must lie in [2, " + std::to_string(data.size())
                             + "]");
        data.resize(*a.t0);
    }
    auto const report = phase1_report(data, a.max_lag);
    auto j = to_json(report);
    bool const reject = report.disp_pvalue < a.alpha;
    j["alpha"] = a.alpha;
    j["overdispersion_warning"] = reject;
    if (reject)
    {
        err << "warning: dispersion test rejects equidispersion (I_hat="
            << format_double(report.disp_hat) << ", p=" << format_double(report.disp_pvalue)
            << ") at alpha=" << format_double(a.alpha)
            << "; a Poisson in-control model is questionable\n";
    }
    auto const text = j.dump(2) + "\n";
    out << text;
    if (!a.out.empty())
        write_file(a.out, text);
    return kExitOk;
}

int cmd_arl(ArlArgs const& a, std::ostream& out)
{
    DesignRecord r = record_from(a.chart, true);
    auto const spec = r.to_spec();
    auto const family = parse_family(a.family);
    auto const out_model = CountModel::make(family, a.mu.value_or(r.mu0), a.disp);
    ChangeScenario scenario{CountModel::poisson(r.mu0), out_model, a.tau};
    auto const opts = make_sim(a.sim);
    auto const stats = ced(spec, scenario, opts);
    nlohmann::json j;
    j["schema"] = kSchema;
    j["record"] = "run_length";
    j["design"] = to_json(r);
    j["scenario"] = {{"family", std::string(to_string(family))},
                     {"mu", out_model.mu()},
                     {"disp", out_model.disp()},
                     {"tau", a.tau}};
    j["reps"] = opts.reps;
    j["seed"] = opts.seed;
    j["stats"] = to_json(stats);
    out << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Poisson count monitoring with EWMA, c-chart and Stein-Chen EWMA charts",
                 "stein-spc"};
    app.require_subcommand(1);

    CalibrateArgs cal_args;
    auto* cal = app.add_subcommand("calibrate", "Find L for a target in-control ARL");
    add_chart_options(cal, cal_args.chart, false);
    add_sim_options(cal, cal_args.sim);
    cal->add_option("--target", cal_args.target, "Target in-control ARL")->capture_default_str();
    cal->add_option("--bracket", cal_args.bracket, "Initial bracket: LO HI")->expected(2);
    cal->add_option("--rel-tol", cal_args.rel_tol, "Relative ARL spread to stop bisection")
        ->capture_default_str();
    cal->add_option("--out", cal_args.out, "Write the design record to this JSON file");

    TableArgs tab_args;
    auto* tab = app.add_subcommand("table", "Reproduce the ARL (1) or CED (2) grid");
    tab->add_option("--table", tab_args.table, "1: zero-state ARL, 2: CED(tau)")->required();
    tab->add_option("--mu0", tab_args.mu0s, "In-control means to include (2 and/or 5)")
        ->capture_default_str();
    add_sim_options(tab, tab_args.sim);
    tab->add_option("--tau", tab_args.tau, "Change point for table 2")->capture_default_str();
    tab->add_option("--csv", tab_args.csv, "CSV output file");
    tab->add_option("--json", tab_args.json, "JSON output file");

    MonitorArgs mon_args;
    auto* mon = app.add_subcommand("monitor", "Apply a chart to a series of counts");
    mon->add_option("--counts", mon_args.counts, "Counts CSV")->required();
    mon->add_option("--design", mon_args.design, "Design record JSON (from calibrate)");
    mon->add_option("--chart", mon_args.chart.chart, "Chart kind: c, ewma, ab, abc");
    mon->add_option("--weight", mon_args.chart.weight, "Stein weight");
    mon->add_option("--weight-table", mon_args.chart.weight_table, "Custom weight file");
    mon->add_option("--lambda", mon_args.chart.lambda, "Smoothing parameter")
        ->capture_default_str();
    mon->add_option("--mu0", mon_args.chart.mu0, "In-control mean");
    mon->add_option("--L", mon_args.chart.limit, "Limit half-width");
    mon->add_option("--threshold", mon_args.chart.threshold, "c-chart threshold");
    mon->add_option("--truncation-m", mon_args.chart.truncation_m, "Fixed truncation index");
    mon->add_option("--tail-tol", mon_args.chart.tail_tol, "Tail tolerance");
    mon->add_option("--skip", mon_args.skip, "Ignore the first N observations");
    mon->add_option("--out", mon_args.out, "Trajectory CSV output");
    mon->add_option("--svg", mon_args.svg, "SVG chart output");
    mon->add_option("--json", mon_args.json, "Alarm report JSON output");
    mon->add_option("--seed", mon_args.seed, "Accepted for uniformity; monitoring is exact");

    Phase1Args p1_args;
    auto* p1 = app.add_subcommand("phase1", "Phase-I diagnostics of a count series");
    p1->add_option("--counts", p1_args.counts, "Counts CSV")->required();
    p1->add_option("--t0", p1_args.t0, "Use only the first T0 observations");
    p1->add_option("--max-lag", p1_args.max_lag, "Largest ACF lag")->capture_default_str();
    p1->add_option("--alpha", p1_args.alpha, "Warning level of the dispersion test")
        ->capture_default_str();
    p1->add_option("--out", p1_args.out, "Report JSON output");
    p1->add_option("--seed", p1_args.seed, "Accepted for uniformity; diagnostics are exact");

    ArlArgs arl_args;
    auto* arl = app.add_subcommand("arl", "Simulate the ARL or CED of one scenario");
    add_chart_options(arl, arl_args.chart, true);
    add_sim_options(arl, arl_args.sim);
    arl->add_option("--family", arl_args.family, "Out-of-control family: poisson, negbin, zip")
        ->capture_default_str();
    arl->add_option("--mu", arl_args.mu, "Out-of-control mean (default mu0)");
    arl->add_option("--disp", arl_args.disp, "Out-of-control dispersion index")
        ->capture_default_str();
    arl->add_option("--tau", arl_args.tau, "Change point (1 = zero-state)")->capture_default_str();

    std::vector<char*> argv;
    std::vector<std::string> storage(args);
    if (storage.empty())
        storage.emplace_back("stein-spc");
    for (auto& s : storage)
        argv.push_back(s.data());
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (*cal)
            return cmd_calibrate(cal_args, out);
        if (*tab)
            return cmd_table(tab_args, out);
        if (*mon)
            return cmd_monitor(mon_args, out);
        if (*p1)
            return cmd_phase1(p1_args, out, err);
        if (*arl)
            return cmd_arl(arl_args, out);
    }
    catch (ParameterError const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (SpecError const& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    catch (InputError const& e)
    {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    catch (DegenerateDataError const& e)
    {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    catch (CalibrationError const& e)
    {
        err << "calibration error: " << e.what() << " (best L=" << format_double(e.best_limit())
            << ", ARL=" << format_double(e.best_arl()) << ")\n";
        return kExitNumerical;
    }
    catch (std::exception const& e)
    {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace steinspc::cli
