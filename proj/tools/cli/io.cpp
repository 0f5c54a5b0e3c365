#include "cli/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "steinspc/errors.hpp"

namespace steinspc::cli {
namespace {

std::string trim(std::string const& s)
{
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool looks_like_header(std::string const& s)
{
    for (unsigned char c : s)
    {
        if (std::isalpha(c) && c != 'e' && c != 'E')
            return true;
    }
    return false;
}

template<class T, class Parse>
std::vector<T> read_lines(std::istream& in, std::string const& source, Parse parse)
{
    std::vector<T> values;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line))
    {
        ++line_no;
        auto const s = trim(line);
        if (s.empty() || s.front() == '#')
            continue;
        if (header_allowed && looks_like_header(s))
        {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        auto value = parse(s);
        if (!value)
        {
            throw InputError(source + ":" + std::to_string(line_no) + ": " + value.error);
        }
        values.push_back(*value.value);
    }
    if (values.empty())
    {
        throw InputError(source + ": no data");
    }
    return values;
}

template<class T>
struct Parsed
{
    std::optional<T> value;
    std::string error;
    explicit operator bool() const { return value.has_value(); }
};

Parsed<count_t> parse_count(std::string const& s)
{
    count_t v = 0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
    {
        return {{}, "expected a nonnegative integer, got '" + s + "'"};
    }
    if (v < 0)
    {
        return {{}, "negative count " + s};
    }
    return {v, {}};
}

Parsed<double> parse_real(std::string const& s)
{
    double v = 0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    {
        return {{}, "expected a finite number, got '" + s + "'"};
    }
    return {v, {}};
}

std::ifstream open(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw InputError("cannot read file '" + path + "'");
    }
    return in;
}

}  // namespace

std::vector<count_t> read_counts(std::istream& in, std::string const& source)
{
    return read_lines<count_t>(in, source, parse_count);
}

std::vector<count_t> read_counts_file(std::string const& path)
{
    auto in = open(path);
    return read_counts(in, path);
}

std::vector<double> read_weight_table_file(std::string const& path)
{
    auto in = open(path);
    return read_lines<double>(in, path, parse_real);
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[32];
    auto const [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

ChartSpec DesignRecord::to_spec() const
{
    Truncation trunc;
    trunc.tail_tol = tail_tol;
    trunc.fixed_m = truncation_m;
    if (kind == ChartKind::CChart)
    {
        return ChartSpec::c_chart(mu0, threshold);
    }
    WeightFunction f = weight_table.empty() ? WeightFunction::parse(weight)
                                            : WeightFunction::tabulated(weight_table);
    return ChartSpec::make(kind, lambda, mu0, std::move(f), limit, trunc);
}

nlohmann::json to_json(DesignRecord const& r)
{
    nlohmann::json j;
    j["schema"] = kSchema;
    j["record"] = "design";
    j["kind"] = std::string(to_string(r.kind));
    j["mu0"] = r.mu0;
    if (r.kind == ChartKind::CChart)
    {
        j["threshold"] = r.threshold;
    }
    else
    {
        j["weight"] = r.weight;
        if (!r.weight_table.empty())
            j["weight_table"] = r.weight_table;
        j["lambda"] = r.lambda;
        j["L"] = r.limit;
        j["tail_tol"] = r.tail_tol;
        j["truncation_m"] = r.truncation_m ? nlohmann::json(*r.truncation_m) : nlohmann::json();
    }
    auto opt = [](auto const& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    j["target_arl"] = opt(r.target_arl);
    j["achieved_arl"] = opt(r.achieved_arl);
    j["se"] = r.se && std::isfinite(*r.se) ? nlohmann::json(*r.se) : nlohmann::json();
    j["reps"] = opt(r.reps);
    j["seed"] = opt(r.seed);
    return j;
}

DesignRecord design_from_json(nlohmann::json const& j)
{
    try
    {
        if (j.value("schema", std::string{}) != kSchema)
        {
            throw InputError(std::string("design record lacks schema '") + kSchema + "'");
        }
        DesignRecord r;
        r.kind = parse_chart_kind(j.at("kind").get<std::string>());
        r.mu0 = j.at("mu0").get<double>();
        if (r.kind == ChartKind::CChart)
        {
            r.threshold = j.at("threshold").get<count_t>();
        }
        else
        {
            r.weight = j.value("weight", std::string("one"));
            if (j.contains("weight_table"))
                r.weight_table = j.at("weight_table").get<std::vector<double>>();
            r.lambda = j.at("lambda").get<double>();
            r.limit = j.at("L").get<double>();
            r.tail_tol = j.value("tail_tol", 1e-10);
            if (j.contains("truncation_m") && !j.at("truncation_m").is_null())
                r.truncation_m = j.at("truncation_m").get<count_t>();
        }
        auto num = [&](char const* key) -> std::optional<double> {
            if (j.contains(key) && j.at(key).is_number())
                return j.at(key).get<double>();
            return {};
        };
        auto u64 = [&](char const* key) -> std::optional<std::uint64_t> {
            if (j.contains(key) && j.at(key).is_number_unsigned())
                return j.at(key).get<std::uint64_t>();
            return {};
        };
        r.target_arl = num("target_arl");
        r.achieved_arl = num("achieved_arl");
        r.se = num("se");
        r.reps = u64("reps");
        r.seed = u64("seed");
        return r;
    }
    catch (nlohmann::json::exception const& e)
    {
        throw InputError(std::string("malformed design record: ") + e.what());
    }
    catch (SpecError const& e)
    {
        throw InputError(std::string("malformed design record: ") + e.what());
    }
}

DesignRecord read_design_file(std::string const& path)
{
    auto in = open(path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (nlohmann::json::exception const& e)
    {
        throw InputError(path + ": " + e.what());
    }
    return design_from_json(j);
}

nlohmann::json to_json(RunLengthStats const& s)
{
    nlohmann::json j;
    j["mean"] = s.mean;
    j["se"] = std::isfinite(s.se) ? nlohmann::json(s.se) : nlohmann::json();
    j["reps_requested"] = s.reps_requested;
    j["reps_used"] = s.reps_used;
    j["reps_discarded"] = s.reps_discarded;
    j["reps_censored"] = s.reps_censored;
    j["reps_attempted"] = s.reps_attempted;
    j["max_t"] = s.max_t;
    return j;
}

nlohmann::json to_json(Phase1Report const& r)
{
    nlohmann::json j;
    j["schema"] = kSchema;
    j["record"] = "phase1";
    j["t0"] = r.t0;
    j["mean"] = r.mean;
    j["disp_hat"] = r.disp_hat;
    j["disp_pvalue"] = r.disp_pvalue;
    auto acf = nlohmann::json::array();
    for (auto const& e : r.acf)
    {
        acf.push_back({{"lag", e.lag},
                       {"value", e.value},
                       {"bound", e.bound},
                       {"significant", e.significant}});
    }
    j["acf"] = acf;
    if (r.zip_fit)
    {
        j["zip_fit"] = {{"omega_hat", r.zip_fit->omega},
                        {"lambda_hat", r.zip_fit->lambda},
                        {"loglik", r.zip_fit->loglik},
                        {"iterations", r.zip_fit->iterations}};
    }
    else
    {
        j["zip_fit"] = nullptr;
    }
    return j;
}

void write_trajectory_csv(std::ostream& out,
                          ChartSpec const& spec,
                          std::vector<count_t> const& series,
                          MonitorResult const& result)
{
    auto const [lcl, ucl] = spec.limits();
    out << "t,x,stat,lcl,ucl,alarm\n";
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        out << (i + 1) << ',' << series[i] << ',' << format_double(result.trajectory[i]) << ','
            << (std::isfinite(lcl) ? format_double(lcl) : std::string{}) << ','
            << format_double(ucl) << ',' << (result.alarms[i] ? 1 : 0) << '\n';
    }
}

}  // namespace steinspc::cli
