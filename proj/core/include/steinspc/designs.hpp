#pragma once

#include <span>
#include <string>
#include <vector>

#include "charts.hpp"
#include "simrl.hpp"

namespace steinspc {

/// A published chart design: kind, weight, in-control mean and half-width.
struct ReferenceDesign
{
    ChartKind kind;
    WeightKind weight;
    double mu0;
    double limit;

    ChartSpec spec(double lambda = 0.1) const;
};

/// The 14 EWMA/AB/ABC designs (lambda = 0.1) for mu0 in {2, 5}, in table
/// order: EWMA, AB |x-1|, ABC |x-1|, AB |x-1|^{1/4}, ABC |x-1|^{1/4},
/// AB ln, ABC ln.
std::span<ReferenceDesign const> table_designs();

/// The seven lambda = 0.1 designs for the particle-count example, mu0 = 1.48.
std::span<ReferenceDesign const> particle_designs();

enum class TableMeasure
{
    ZeroState,
    Ced
};

/// One row of the reproduction grid with its labels.
struct GridEntry
{
    TableCell cell;
    ReferenceDesign design;
    Family family;
    double shift;  ///< mu - mu0
    double mu;
    double disp;
};

inline constexpr double kTableDispersion = 5.0 / 3.0;
inline constexpr count_t kTableTau = 100;

/*!
 * Grid of designs x {ZIP, Poi, NB} x shifts {-0.25, 0, +0.25}.
 *
 * For ZeroState the scenario is the shifted model from t = 1; for Ced the
 * process is Poisson(mu0) before `tau`. Cell ids are the index in the full
 * grid over mu0 in {2, 5}, so selecting a subset keeps its random numbers.
 * `mu0s` must be drawn from {2, 5}.
 */
std::vector<GridEntry> reference_grid(TableMeasure measure,
                                      std::span<double const> mu0s,
                                      count_t tau = kTableTau);

}  // namespace steinspc
