#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace pulsearea::numeric {

/// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Abscissae are listed
/// from the outside in; the last entry is the centre node.
struct GaussKronrod15 {
    static constexpr std::array<double, 8> kronrod_nodes{
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr std::array<double, 8> kronrod_weights{
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    // Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
    static constexpr std::array<double, 4> gauss_weights{
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

/// Kronrod estimate on [a, b] with |K15 - G7| as the error estimate.
template <class F>
Panel gauss_kronrod15(F&& f, double a, double b) {
    using R = GaussKronrod15;
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * R::kronrod_weights[7];
    double gauss = fc * R::gauss_weights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * R::kronrod_nodes[i];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += R::kronrod_weights[i] * pair;
        if (i % 2 == 1) {
            gauss += R::gauss_weights[i / 2] * pair;
        }
    }
    return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod integration: the panel with the largest
/// error estimate is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |I|) or `max_panels` is reached.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                           std::size_t max_panels = 2000) {
    if (a == b) {
        return {0.0, 0.0, 0, true};
    }
    auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::vector<Panel> heap;
    heap.push_back(gauss_kronrod15(f, a, b));
    double value = heap.front().value;
    double error = heap.front().error;

    const auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(value)); };
    const double eps = std::numeric_limits<double>::epsilon();

    while (error > target() && heap.size() < max_panels) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (std::abs(worst.b - worst.a) <= 16.0 * eps * std::max(std::abs(worst.a), 1.0)) {
            // Panel can no longer be split; keep it and stop refining.
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), worse);
            break;
        }
        const Panel left = gauss_kronrod15(f, worst.a, mid);
        const Panel right = gauss_kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);

        // Re-sum periodically to keep the running totals from drifting.
        if (heap.size() % 64 == 0) {
            value = 0.0;
            for (const Panel& p : heap) value += p.value;
        }
        error = 0.0;
        for (const Panel& p : heap) error += p.error;
    }

    value = 0.0;
    error = 0.0;
    for (const Panel& p : heap) {
        value += p.value;
        error += p.error;
    }
    return {value, error, heap.size(), error <= target()};
}

}  // namespace pulsearea::numeric
