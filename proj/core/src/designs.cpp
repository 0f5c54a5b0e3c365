#include "steinspc/designs.hpp"

#include <array>
#include <cmath>

#include "steinspc/errors.hpp"

namespace steinspc {
namespace {

WeightFunction weight_of(WeightKind kind)
{
    switch (kind)
    {
        case WeightKind::AbsLinear:
            return WeightFunction::abs_linear();
        case WeightKind::AbsRoot:
            return WeightFunction::abs_root();
        case WeightKind::Log:
            return WeightFunction::log();
        default:
            return WeightFunction::constant_one();
    }
}

using CK = ChartKind;
using WK = WeightKind;

constexpr std::array<ReferenceDesign, 14> kTableDesigns{{
    {CK::Ewma, WK::ConstantOne, 2, 0.877},
    {CK::AbEwma, WK::AbsLinear, 2, 1.191},
    {CK::AbcEwma, WK::AbsLinear, 2, 0.463},
    {CK::AbEwma, WK::AbsRoot, 2, 1.053},
    {CK::AbcEwma, WK::AbsRoot, 2, 0.382},
    {CK::AbEwma, WK::Log, 2, 1.089},
    {CK::AbcEwma, WK::Log, 2, 0.396},
    {CK::Ewma, WK::ConstantOne, 5, 1.388},
    {CK::AbEwma, WK::AbsLinear, 5, 1.614},
    {CK::AbcEwma, WK::AbsLinear, 5, 0.1828},
    {CK::AbEwma, WK::AbsRoot, 5, 1.424},
    {CK::AbcEwma, WK::AbsRoot, 5, 0.106},
    {CK::AbEwma, WK::Log, 5, 1.465},
    {CK::AbcEwma, WK::Log, 5, 0.118},
}};

constexpr std::array<ReferenceDesign, 7> kParticleDesigns{{
    {CK::Ewma, WK::ConstantOne, 1.48, 0.758},
    {CK::AbEwma, WK::AbsLinear, 1.48, 1.099},
    {CK::AbEwma, WK::AbsRoot, 1.48, 0.986},
    {CK::AbEwma, WK::Log, 1.48, 1.017},
    {CK::AbcEwma, WK::AbsLinear, 1.48, 0.638},
    {CK::AbcEwma, WK::AbsRoot, 1.48, 0.574},
    {CK::AbcEwma, WK::Log, 1.48, 0.581},
}};

constexpr std::array<Family, 3> kFamilies{Family::Zip, Family::Poisson, Family::NegBin};
constexpr std::array<double, 3> kShifts{-0.25, 0.0, 0.25};
constexpr std::array<double, 2> kTableMeans{2.0, 5.0};
constexpr std::size_t kDesignsPerMean = 7;

}  // namespace

ChartSpec ReferenceDesign::spec(double lambda) const
{
    return ChartSpec::make(kind, lambda, mu0, weight_of(weight), limit);
}

std::span<ReferenceDesign const> table_designs()
{
    return kTableDesigns;
}

std::span<ReferenceDesign const> particle_designs()
{
    return kParticleDesigns;
}

std::vector<GridEntry>
reference_grid(TableMeasure measure, std::span<double const> mu0s, count_t tau)
{
    std::vector<GridEntry> grid;
    for (double mu0 : mu0s)
    {
        std::size_t mean_index = kTableMeans.size();
        for (std::size_t i = 0; i < kTableMeans.size(); ++i)
        {
            if (kTableMeans[i] == mu0)
                mean_index = i;
        }
        if (mean_index == kTableMeans.size())
        {
            throw ParameterError("reference grid is defined for mu0 in {2, 5}");
        }
        for (std::size_t d = 0; d < kDesignsPerMean; ++d)
        {
            auto const& design = kTableDesigns[mean_index * kDesignsPerMean + d];
            ChartSpec const spec = design.spec();
            for (std::size_t f = 0; f < kFamilies.size(); ++f)
            {
                for (std::size_t s = 0; s < kShifts.size(); ++s)
                {
                    double const mu = mu0 + kShifts[s];
                    double const disp
                        = kFamilies[f] == Family::Poisson ? 1.0 : kTableDispersion;
                    auto const out = CountModel::make(kFamilies[f], mu, disp);
                    ChangeScenario scenario
                        = measure == TableMeasure::ZeroState
                              ? ChangeScenario::zero_state(out)
                              : ChangeScenario{CountModel::poisson(mu0), out, tau};
                    std::uint64_t const id
                        = ((mean_index * kDesignsPerMean + d) * kFamilies.size() + f)
                              * kShifts.size()
                          + s;
                    grid.push_back({{spec, scenario, id}, design, kFamilies[f], kShifts[s], mu,
                                    disp});
                }
            }
        }
    }
    return grid;
}

}  // namespace steinspc
