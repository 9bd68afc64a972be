#pragma once

#include <cmath>
#include <vector>

#include "cmcfol/metric.hpp"
#include "cmcfol/sphere.hpp"

// a lopsided model exercising offsets, odd powers, and mixed components;
// shared across test suites so every module sees the same awkward metric
inline cmcfol::MetricModel messy_model() {
    cmcfol::MetricModel m;
    m.type = "sum";
    m.mass = 0.7;
    m.center = {0.1, -0.2, 0.05};
    m.r_min = 2.0;
    m.epsilon = 0.5;
    m.terms = {
        {0, 1, 0.03, {1, 0, 0}, 2.5, {0, 0, 0}},
        {1, 1, -0.02, {0, 1, 1}, 3.5, {0.3, 0, 0}},
        {2, 2, 0.05, {0, 0, 0}, 2.0, {0, 0, 0}},
        {0, 2, 0.01, {2, 0, 0}, 4.0, {0, 0.1, 0}},
    };
    m.compile();
    return m;
}

// deterministic non-axisymmetric graph perturbation, decaying across degrees
inline std::vector<double> bumpy(const cmcfol::SphereGrid& grid, double amp, int lmax) {
    std::vector<double> c(grid.nbasis(), 0.0);
    for (int l = 1; l <= lmax; ++l)
        for (int p = l * l; p < (l + 1) * (l + 1); ++p)
            c[p] = amp * std::cos(1.7 * p + 0.3) / double(1 + l * l);
    return c;
}
