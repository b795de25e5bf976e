#include "nambu/normal_form.hpp"

#include "nambu/flow.hpp"
#include "nambu/plucker.hpp"
#include "nambu/rng.hpp"

#include <algorithm>
#include <cmath>

namespace nambu {

namespace {

std::vector<double> to_doubles(const std::vector<Rat>& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = to_double(x[i]);
    return out;
}

ScalarField linear_form(int n, const std::vector<Rat>& row) {
    ExactPoly p(n);
    for (int i = 1; i <= n; ++i) {
        const Rat& c = row[static_cast<std::size_t>(i - 1)];
        if (!c.is_zero()) p += c * ExactPoly::variable(n, i);
    }
    return {n, std::move(p)};
}

// rational-function scalar num/den as a first-class numeric field, with the
// quotient-rule 2-jet
ScalarField rational_field(int n, ExactPoly num, ExactPoly den) {
    auto body = [n, num = std::move(num), den = std::move(den)](const std::vector<double>& x) {
        ScalarField nf(n, num), df(n, den);
        Jet2 jn = nf.jet(x), jd = df.jet(x);
        const double d = jd.value;
        Jet2 out = Jet2::zero(n);
        out.value = jn.value / d;
        for (int i = 0; i < n; ++i)
            out.grad[static_cast<std::size_t>(i)] =
                jn.grad[static_cast<std::size_t>(i)] / d -
                jn.value * jd.grad[static_cast<std::size_t>(i)] / (d * d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.h(i, j) = jn.h(i, j) / d -
                              (jn.grad[static_cast<std::size_t>(i)] * jd.grad[static_cast<std::size_t>(j)] +
                               jn.grad[static_cast<std::size_t>(j)] * jd.grad[static_cast<std::size_t>(i)] +
                               jn.value * jd.h(i, j)) /
                                  (d * d) +
                              2 * jn.value * jd.grad[static_cast<std::size_t>(i)] *
                                  jd.grad[static_cast<std::size_t>(j)] / (d * d * d);
        return out;
    };
    return {n, NumericFn(std::move(body))};
}

}  // namespace

CharacteristicFrame characteristic_frame(const NambuStructure& S, const std::vector<Rat>& x) {
    const int n = S.n();
    const int r = S.order();
    const int m = S.restriction_rank();
    std::vector<double> xd = to_doubles(x);
    PointClass pc = classify_point(S, xd);
    if (!pc.regular)
        throw StructuralError("characteristic_frame: the point is singular");
    {
        NumTensor lam = S.tensor().eval(xd);
        PluckerNumeric pl = plucker_check_numeric(lam);
        if (!pl.decomposable)
            throw StructuralError("characteristic_frame: tensor not decomposable at the point");
    }

    RatTensor lam = S.tensor().eval_exact(x);
    // candidate functions: the admissible linear forms; pick the r-subset
    // with the largest |Lambda(dl_1,..,dl_r)(x)|, lexicographic first on ties
    std::vector<std::vector<Rat>> rows = S.restriction();
    MultiIndex best;
    Rat best_abs(-1);
    for (const auto& combo : increasing_multiindices(m, r)) {
        std::vector<std::vector<Rat>> args;
        for (int i = 0; i < r; ++i) args.push_back(rows[static_cast<std::size_t>(combo[i] - 1)]);
        Rat v = eval_alt(lam, args);
        Rat a = v < 0 ? Rat(-v) : v;
        if (a > best_abs) {
            best_abs = a;
            best = combo;
        }
    }
    if (best_abs.is_zero())
        throw StructuralError(
            "characteristic_frame: no restriction-row subset has a nonzero contraction");

    CharacteristicFrame frame;
    for (int i = 0; i < r; ++i) {
        frame.pivot_rows.push_back(best[i]);
        frame.functions.push_back(linear_form(n, rows[static_cast<std::size_t>(best[i] - 1)]));
    }
    // normalize f_1 so the full bracket is 1 at the center
    {
        std::vector<std::vector<Rat>> args;
        for (int i = 0; i < r; ++i) args.push_back(rows[static_cast<std::size_t>(best[i] - 1)]);
        Rat c = eval_alt(lam, args);
        frame.functions[0] = Rat(1) / c * frame.functions[0];
    }
    for (int i = 0; i < r; ++i) {
        std::vector<ScalarField> rest;
        for (int j = 0; j < r; ++j)
            if (j != i) rest.push_back(frame.functions[static_cast<std::size_t>(j)]);
        VectorField xi = hamiltonian_field(S, rest);
        if ((r - 1 - i) % 2 != 0) xi = Rat(-1) * xi;
        frame.fields.push_back(std::move(xi));
    }
    {
        std::vector<ScalarField> fs = frame.functions;
        frame.center_bracket = bracket_field(S, fs).value_exact(x);
        // determinant of <df_i, X_j> at the center
        RatMat mat(static_cast<std::size_t>(r), std::vector<Rat>(static_cast<std::size_t>(r)));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    frame.fields[static_cast<std::size_t>(j)]
                        .apply(frame.functions[static_cast<std::size_t>(i)])
                        .value_exact(x);
        // exact determinant by elimination-free expansion (r is small)
        std::function<Rat(std::vector<int>&, int)> det = [&](std::vector<int>& cols, int row) -> Rat {
            if (row == r) return Rat(1);
            Rat acc(0);
            for (std::size_t ci = 0; ci < cols.size(); ++ci) {
                int col = cols[ci];
                if (col < 0) continue;
                const Rat& e = mat[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
                if (e.is_zero()) continue;
                cols[ci] = -1;
                Rat sub = det(cols, row + 1);
                cols[ci] = col;
                int before = 0;
                for (std::size_t cj = 0; cj < ci; ++cj)
                    if (cols[cj] >= 0) ++before;
                Rat term = e * sub;
                acc += before % 2 == 0 ? term : Rat(-term);
            }
            return acc;
        };
        std::vector<int> cols(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) cols[static_cast<std::size_t>(i)] = i;
        frame.center_determinant = det(cols, 0);
    }
    return frame;
}

namespace {

// Cleared-denominator straightening of the characteristic frame: columns of
// the adjugate of the pivot block applied to the Hamiltonian frame.  The
// normalized fields Y_j = Y'_j / den commute (checked exactly on cleared
// denominators) and the tensor equals density * Y_1 ^ ... ^ Y_r.
struct StraightenedFrame {
    std::vector<VectorField> yprime;
    ExactPoly den;
    ExactPoly density;
    std::vector<int> pivot_axes;
    std::vector<int> transversal_axes;
};

StraightenedFrame straightened_frame(const NambuStructure& S, const std::vector<Rat>& x) {
    if (!S.is_exact())
        throw UnsupportedModeError("commuting_frame: exact coefficients required");
    const int n = S.n();
    const int r = S.order();
    CharacteristicFrame cf = characteristic_frame(S, x);

    // pivot axes: greedy partial pivoting on the frame value matrix at x
    std::vector<std::vector<Rat>> values(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j) {
        values[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i)
            values[static_cast<std::size_t>(j)][static_cast<std::size_t>(i - 1)] =
                cf.fields[static_cast<std::size_t>(j)].component(i).value_exact(x);
    }
    std::vector<int> pivot_axes;
    {
        RatMat work(static_cast<std::size_t>(r), std::vector<Rat>(static_cast<std::size_t>(n)));
        for (int j = 0; j < r; ++j) work[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(j)];
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (int step = 0; step < r; ++step) {
            // largest |entry| in row `step` among unused axes
            int best_axis = -1;
            Rat best_abs(-1);
            for (int a = 0; a < n; ++a) {
                if (used[static_cast<std::size_t>(a)]) continue;
                Rat v = work[static_cast<std::size_t>(step)][static_cast<std::size_t>(a)];
                Rat av = v < 0 ? Rat(-v) : v;
                if (av > best_abs) {
                    best_abs = av;
                    best_axis = a;
                }
            }
            if (best_axis < 0 || best_abs.is_zero())
                throw ChartError("commuting_frame: frame value matrix is rank-deficient");
            used[static_cast<std::size_t>(best_axis)] = true;
            pivot_axes.push_back(best_axis + 1);
            for (int jr = step + 1; jr < r; ++jr) {
                Rat f = work[static_cast<std::size_t>(jr)][static_cast<std::size_t>(best_axis)] /
                        work[static_cast<std::size_t>(step)][static_cast<std::size_t>(best_axis)];
                if (f.is_zero()) continue;
                for (int a = 0; a < n; ++a)
                    work[static_cast<std::size_t>(jr)][static_cast<std::size_t>(a)] -=
                        f * work[static_cast<std::size_t>(step)][static_cast<std::size_t>(a)];
            }
        }
        std::sort(pivot_axes.begin(), pivot_axes.end());
    }

    // pivot-block matrix A with A[i][j] = component of X_j along pivot axis i
    std::vector<std::vector<ExactPoly>> A(static_cast<std::size_t>(r),
                                          std::vector<ExactPoly>(static_cast<std::size_t>(r), ExactPoly(n)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                cf.fields[static_cast<std::size_t>(j)].component(pivot_axes[static_cast<std::size_t>(i)]).poly();

    // determinant and adjugate over the polynomial ring
    std::function<ExactPoly(const std::vector<std::vector<ExactPoly>>&)> pdet =
        [&](const std::vector<std::vector<ExactPoly>>& mm) -> ExactPoly {
        const int k = static_cast<int>(mm.size());
        if (k == 1) return mm[0][0];
        ExactPoly acc(n);
        for (int c = 0; c < k; ++c) {
            if (mm[0][static_cast<std::size_t>(c)].is_zero()) continue;
            std::vector<std::vector<ExactPoly>> minor;
            for (int i = 1; i < k; ++i) {
                std::vector<ExactPoly> row;
                for (int j = 0; j < k; ++j)
                    if (j != c) row.push_back(mm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                minor.push_back(std::move(row));
            }
            ExactPoly term = mm[0][static_cast<std::size_t>(c)] * pdet(minor);
            acc += c % 2 == 0 ? term : -term;
        }
        return acc;
    };
    ExactPoly den = pdet(A);
    if (den.eval(x).is_zero())
        throw ChartError("commuting_frame: pivot determinant vanishes at the center");

    // adjugate columns give the cleared-denominator straightened frame
    std::vector<VectorField> yprime;
    for (int j = 0; j < r; ++j) {
        VectorField acc = VectorField::zero(n);
        for (int k = 0; k < r; ++k) {
            // adj(A)[k][j] = (-1)^{k+j} * minor_det(A without row j... transposed)
            std::vector<std::vector<ExactPoly>> minor;
            for (int ii = 0; ii < r; ++ii) {
                if (ii == j) continue;
                std::vector<ExactPoly> row;
                for (int jj = 0; jj < r; ++jj)
                    if (jj != k) row.push_back(A[static_cast<std::size_t>(ii)][static_cast<std::size_t>(jj)]);
                minor.push_back(std::move(row));
            }
            ExactPoly cof = r == 1 ? ExactPoly::constant(n, Rat(1)) : pdet(minor);
            if ((k + j) % 2 != 0) cof = -cof;
            acc = acc + ScalarField(n, cof) * cf.fields[static_cast<std::size_t>(k)];
        }
        yprime.push_back(std::move(acc));
    }

    // exact commutation of Y_i = Y'_i / den, on cleared denominators:
    //   den*[Y'_i, Y'_j] - Y'_i(den)*Y'_j + Y'_j(den)*Y'_i = 0
    ScalarField den_f(n, den);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            VectorField lhs = den_f * lie_bracket(yprime[static_cast<std::size_t>(i)], yprime[static_cast<std::size_t>(j)]) -
                              yprime[static_cast<std::size_t>(i)].apply(den_f) * yprime[static_cast<std::size_t>(j)] +
                              yprime[static_cast<std::size_t>(j)].apply(den_f) * yprime[static_cast<std::size_t>(i)];
            if (!lhs.is_zero())
                throw ChartError("commuting_frame: straightened frame does not commute");
        }

    // density: Lambda = c * Y_1 ^ .. ^ Y_r with c the coefficient of Lambda
    // at the pivot multi-index
    ExactPoly density = S.tensor().coeff(MultiIndex(pivot_axes)).poly();
    // verify proportionality on cleared denominators: Y' = den * Y, so
    //   den^r * Lambda = c * (Y'_1 ^ ... ^ Y'_r)
    {
        MultiVectorField ywedge = wedge_fields(yprime);
        ScalarField dpow = ScalarField::constant(n, Rat(1));
        for (int i = 0; i < r; ++i) dpow = dpow * den_f;
        MultiVectorField lhs = dpow * S.tensor();
        MultiVectorField rhs = ScalarField(n, density) * ywedge;
        if (!(lhs - rhs).is_zero())
            throw ChartError("commuting_frame: tensor is not proportional to the frame wedge");
    }

    StraightenedFrame out;
    out.yprime = std::move(yprime);
    out.den = std::move(den);
    out.density = std::move(density);
    out.pivot_axes = pivot_axes;
    for (int a = 1; a <= n; ++a)
        if (std::find(pivot_axes.begin(), pivot_axes.end(), a) == pivot_axes.end())
            out.transversal_axes.push_back(a);
    return out;
}

}  // namespace

CommutingFrame commuting_frame(const NambuStructure& S, const std::vector<Rat>& x) {
    const int n = S.n();
    const int r = S.order();
    StraightenedFrame sf = straightened_frame(S, x);
    const auto& yprime = sf.yprime;
    const ExactPoly& den = sf.den;
    const ExactPoly& density = sf.density;
    const std::vector<int>& pivot_axes = sf.pivot_axes;

    // absorb the density into one slot along which it is invariant
    int absorb = -1;
    for (int k = 0; k < r && absorb < 0; ++k) {
        bool ok = true;
        for (int j = 0; j < r; ++j) {
            if (j == k) continue;
            if (!yprime[static_cast<std::size_t>(j)].apply(ScalarField(n, density)).is_zero()) {
                ok = false;
                break;
            }
        }
        if (ok) absorb = k;
    }
    if (absorb < 0)
        throw ChartError(
            "commuting_frame: no slot can absorb the leaf density with polynomial data");

    CommutingFrame out;
    out.pivot_axes = pivot_axes;
    out.transversal_axes = sf.transversal_axes;
    out.denominator = den;
    out.center = to_doubles(x);

    for (int j = 0; j < r; ++j) {
        std::vector<ScalarField> comps;
        for (int i = 1; i <= n; ++i) {
            ExactPoly num = yprime[static_cast<std::size_t>(j)].component(i).poly();
            if (j == absorb) num = num * density;
            if (num.is_zero())
                comps.push_back(ScalarField::constant(n, Rat(0)));
            else
                comps.push_back(rational_field(n, std::move(num), den));
        }
        out.fields.emplace_back(n, std::move(comps));
    }

    // affine duals supported on the pivot axes, scaled so df-bar_i(Z_j)(x) is
    // the identity matrix; Z_j has exact pivot rows delta_ij (up to the
    // absorbed density), so only a diagonal rescaling is needed
    for (int i = 0; i < r; ++i) {
        int axis = pivot_axes[static_cast<std::size_t>(i)];
        ExactPoly numcomp = yprime[static_cast<std::size_t>(i)].component(axis).poly();
        if (i == absorb) numcomp = numcomp * density;
        Rat exact_val =
            ScalarField(n, numcomp).value_exact(x) / ScalarField(n, den).value_exact(x);
        if (exact_val.is_zero())
            throw ChartError("commuting_frame: degenerate dual normalization");
        ExactPoly affine = ExactPoly::variable(n, axis);
        affine += ExactPoly::constant(n, -x[static_cast<std::size_t>(axis - 1)]);
        affine *= Rat(1) / exact_val;
        out.dual_functions.emplace_back(n, std::move(affine));
    }
    return out;
}

namespace {

Mat fd_jacobian(const std::function<std::vector<double>(const std::vector<double>&)>& f,
                const std::vector<double>& w, double h = 1e-6) {
    std::vector<double> base = f(w);
    const int nout = static_cast<int>(base.size());
    const int nin = static_cast<int>(w.size());
    Mat jac(static_cast<std::size_t>(nout), std::vector<double>(static_cast<std::size_t>(nin)));
    for (int j = 0; j < nin; ++j) {
        std::vector<double> wp = w, wm = w;
        wp[static_cast<std::size_t>(j)] += h;
        wm[static_cast<std::size_t>(j)] -= h;
        std::vector<double> fp = f(wp), fm = f(wm);
        for (int i = 0; i < nout; ++i)
            jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2 * h);
    }
    return jac;
}

}  // namespace

ChartMap darboux_chart(const NambuStructure& S, const std::vector<Rat>& x,
                       const DarbouxOptions& opts) {
    const int n = S.n();
    const int r = S.order();
    StraightenedFrame sf = straightened_frame(S, x);
    std::vector<double> center = to_doubles(x);

    // Leaf flow fields: the first slot carries the full leaf density, the
    // rest are the plain straightened frame.  Inner fields transported
    // through the outermost flow change only by multiples of the first
    // field, which cancel inside the wedge, so the push-forward of the
    // canonical frame reproduces the tensor without any invariance condition
    // on the density.
    std::vector<VectorField> flow_fields;
    for (int j = 0; j < r; ++j) {
        std::vector<ScalarField> comps;
        for (int i = 1; i <= n; ++i) {
            ExactPoly num = sf.yprime[static_cast<std::size_t>(j)].component(i).poly();
            if (j == 0) num = num * sf.density;
            if (num.is_zero())
                comps.push_back(ScalarField::constant(n, Rat(0)));
            else
                comps.push_back(rational_field(n, std::move(num), sf.den));
        }
        flow_fields.emplace_back(n, std::move(comps));
    }

    FlowOptions fopts;
    fopts.step = S.box().min_edge() / 256.0;
    fopts.tol = 1e-9;
    fopts.box = S.box();

    const std::vector<int> transversal_axes = sf.transversal_axes;
    auto inverse = [flow_fields, transversal_axes, center, fopts, r](const std::vector<double>& w) {
        std::vector<double> p = center;
        for (std::size_t a = 0; a < transversal_axes.size(); ++a)
            p[static_cast<std::size_t>(transversal_axes[a] - 1)] +=
                w[static_cast<std::size_t>(r) + a];
        // leaf flows, outermost first coordinate
        for (int i = r - 1; i >= 0; --i) {
            double t = w[static_cast<std::size_t>(i)];
            if (t != 0.0) p = flow(flow_fields[static_cast<std::size_t>(i)], p, t, fopts).point;
        }
        return p;
    };

    Mat j0 = fd_jacobian(inverse, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    Mat j0_inv = invert_dense(j0);
    double cond = 0;
    {
        double smax = sigma_max(j0);
        Mat j0i = j0_inv;
        double smax_i = sigma_max(j0i);
        cond = smax * smax_i;
    }

    auto forward = [inverse, j0_inv, center, n](const std::vector<double>& y) {
        // damped Newton on F(w) = inverse(w) - y
        std::vector<double> w(static_cast<std::size_t>(n), 0.0);
        // linear initial guess from the center Jacobian
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (int j = 0; j < n; ++j)
                acc += j0_inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                       (y[static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)]);
            w[static_cast<std::size_t>(i)] = acc;
        }
        auto residual_norm = [&](const std::vector<double>& wv) {
            std::vector<double> img = inverse(wv);
            double s = 0;
            for (int i = 0; i < n; ++i) {
                double d = img[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
                s += d * d;
            }
            return std::sqrt(s);
        };
        double res = residual_norm(w);
        for (int iter = 0; iter < 60 && res > 1e-13; ++iter) {
            Mat jac = fd_jacobian(inverse, w);
            std::vector<double> rhs(static_cast<std::size_t>(n));
            std::vector<double> img = inverse(w);
            for (int i = 0; i < n; ++i)
                rhs[static_cast<std::size_t>(i)] = img[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
            std::vector<double> step = solve_dense(jac, rhs);
            double damp = 1.0;
            for (int back = 0; back < 30; ++back) {
                std::vector<double> trial = w;
                for (int i = 0; i < n; ++i)
                    trial[static_cast<std::size_t>(i)] -= damp * step[static_cast<std::size_t>(i)];
                double tres = residual_norm(trial);
                if (tres < res) {
                    w = std::move(trial);
                    res = tres;
                    break;
                }
                damp *= 0.5;
                if (back == 29)
                    throw ChartError("darboux_chart: Newton inversion failed to descend");
            }
        }
        if (res > 1e-9) throw ChartError("darboux_chart: Newton inversion did not converge");
        return w;
    };

    // shrink the chart box until the round trip holds at the probe points
    double edge = S.box().min_edge() / 2.0;
    SeededRng rng(opts.seed);
    Box chart_box;
    bool ok = false;
    while (edge >= opts.min_box_edge) {
        chart_box = Box::cube(n, edge / 2.0);
        ok = true;
        SeededRng probe_rng(rng.seed());
        for (int p = 0; p < opts.probe_points && ok; ++p) {
            std::vector<double> w = probe_rng.point_in(chart_box);
            try {
                std::vector<double> y = inverse(w);
                std::vector<double> w2 = forward(y);
                for (int i = 0; i < n; ++i)
                    if (std::abs(w2[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]) >
                        opts.roundtrip_tol) {
                        ok = false;
                        break;
                    }
            } catch (const FlowError&) {
                ok = false;
            } catch (const ChartError&) {
                ok = false;
            }
        }
        if (ok) break;
        edge /= 2.0;
    }
    if (!ok)
        throw ChartError("darboux_chart: no box satisfied the round-trip tolerance");

    ChartMap chart;
    chart.center = center;
    chart.leaf_dim = r;
    chart.chart_box = chart_box;
    chart.inverse = inverse;
    chart.forward = forward;
    chart.jacobian_at_center = j0;
    chart.condition_number = cond;
    return chart;
}

CheckReport verify_chart(const NambuStructure& S, const ChartMap& chart, int samples,
                         double tol, std::uint64_t seed) {
    CheckReport rep;
    rep.name = "darboux.verify";
    rep.property = "push-forward of the tensor equals the constant canonical tensor";
    rep.mode = "sampled";
    rep.seed = seed;
    const int n = S.n();
    const int r = chart.leaf_dim;
    SeededRng rng(seed);
    double worst = 0;
    std::vector<double> worst_at;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> w = rng.point_in(chart.chart_box);
        std::vector<double> z = chart.inverse(w);
        // Jacobian of the forward map at z = inverse of the inverse-map Jacobian at w
        Mat jinv(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
        {
            auto f = chart.inverse;
            Mat jac(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
            const double h = 1e-6;
            for (int j = 0; j < n; ++j) {
                std::vector<double> wp = w, wm = w;
                wp[static_cast<std::size_t>(j)] += h;
                wm[static_cast<std::size_t>(j)] -= h;
                std::vector<double> fp = f(wp), fm = f(wm);
                for (int i = 0; i < n; ++i)
                    jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2 * h);
            }
            jinv = invert_dense(jac);
        }
        NumTensor lam = S.tensor().eval(z);
        // push forward by jinv (the forward differential)
        NumTensor pushed(n, r, Variance::Vector);
        for (const auto& [I, c] : lam.coeffs()) {
            NumTensor acc(n, 0, Variance::Vector);
            acc.set(MultiIndex{}, c);
            for (int slot = 0; slot < r; ++slot) {
                NumTensor col(n, 1, Variance::Vector);
                for (int i = 1; i <= n; ++i) {
                    double v = jinv[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(I[slot] - 1)];
                    if (v != 0.0) col.set(MultiIndex({i}), v);
                }
                acc = wedge(acc, col);
            }
            pushed += acc;
        }
        std::vector<int> leading(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) leading[static_cast<std::size_t>(i)] = i + 1;
        NumTensor canonical(n, r, Variance::Vector);
        canonical.set(MultiIndex(leading), 1.0);
        NumTensor diff = pushed - canonical;
        double dev = 0;
        for (const auto& [I, c] : diff.coeffs()) dev = std::max(dev, std::abs(c));
        ++rep.cases;
        if (dev > worst) {
            worst = dev;
            worst_at = w;
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", worst);
    rep.residual = buf;
    if (worst < tol) {
        rep.verdict = Verdict::Pass;
    } else {
        rep.verdict = Verdict::Fail;
        rep.witness = Witness{"chart push-forward", worst_at, "coefficient deviation above tolerance"};
    }
    return rep;
}

}  // namespace nambu
