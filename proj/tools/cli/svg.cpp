#include <algorithm>
#include <cmath>
#include <sstream>

#include "cli/io.hpp"

namespace steinspc::cli {
namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 300;
constexpr double kMargin = 40;

}  // namespace

std::string render_svg(ChartSpec const& spec,
                       std::vector<count_t> const& series,
                       MonitorResult const& result)
{
    auto const [lcl, ucl] = spec.limits();
    double lo = spec.center();
    double hi = spec.center();
    for (double v : result.trajectory)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (std::isfinite(lcl))
        lo = std::min(lo, lcl);
    hi = std::max(hi, ucl);
    if (spec.kind() == ChartKind::CChart)
        lo = std::min(lo, 0.0);
    double const pad = 0.05 * std::max(hi - lo, 1e-9);
    lo -= pad;
    hi += pad;

    std::size_t const n = std::max<std::size_t>(series.size(), 2);
    auto px = [&](std::size_t t) {
        return kMargin + (kWidth - 2 * kMargin) * static_cast<double>(t - 1)
                             / static_cast<double>(n - 1);
    };
    auto py = [&](double v) {
        return kHeight - kMargin - (kHeight - 2 * kMargin) * (v - lo) / (hi - lo);
    };
    auto hline = [&](std::ostringstream& os, double v, char const* style) {
        os << "<line x1=\"" << kMargin << "\" x2=\"" << kWidth - kMargin << "\" y1=\""
           << format_double(py(v)) << "\" y2=\"" << format_double(py(v)) << "\" " << style
           << "/>\n";
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">"
       << to_string(spec.kind()) << " chart, mu0=" << format_double(spec.mu0());
    if (spec.kind() == ChartKind::CChart)
        os << ", alarm if x &gt;= " << spec.c_threshold();
    else
        os << ", L=" << format_double(spec.limit());
    os << "</text>\n";

    hline(os, spec.center(), "stroke=\"gray\"");
    if (std::isfinite(lcl))
        hline(os, lcl, "stroke=\"black\" stroke-dasharray=\"6,3\"");
    hline(os, ucl, "stroke=\"black\" stroke-dasharray=\"6,3\"");

    if (result.first_alarm)
    {
        double const x = px(*result.first_alarm);
        os << "<line x1=\"" << format_double(x) << "\" x2=\"" << format_double(x) << "\" y1=\""
           << kMargin << "\" y2=\"" << kHeight - kMargin
           << "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";
    }

    os << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (std::size_t i = 0; i < result.trajectory.size(); ++i)
    {
        os << format_double(px(i + 1)) << ',' << format_double(py(result.trajectory[i])) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < result.trajectory.size(); ++i)
    {
        os << "<circle cx=\"" << format_double(px(i + 1)) << "\" cy=\""
           << format_double(py(result.trajectory[i])) << "\" r=\"2.5\" fill=\""
           << (result.alarms[i] ? "crimson" : "steelblue") << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace steinspc::cli
