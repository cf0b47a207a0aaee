#include "acx/cohomology.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace acx {

static std::atomic<size_t> worker_count{1};

void set_workers(size_t count)
{
    worker_count = count;
}

size_t workers()
{
    return worker_count;
}

template <class F>
static size_t parallel_sum(size_t count, F&& fn)
{
    size_t threads = std::min(workers(), count);
    if (threads <= 1) {
        size_t total = 0;
        for (size_t k = 0; k < count; ++k)
            total += fn(k);
        return total;
    }
    std::atomic<size_t> next{0}, total{0};
    std::exception_ptr error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (size_t k = next++; k < count; k = next++) {
                try {
                    total += fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(error_lock);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
    return total;
}

template <class F>
static size_t sum_weights(const GradedComplex& gc, F&& fn)
{
    return parallel_sum(gc.weights().size(), fn);
}

ExactMatrix block(const GradedComplex& gc, Op op, size_t w, Bidegree from)
{
    return gc.block_op(op, w, from);
}

ExactMatrix degree_block(const GradedComplex& gc, size_t w, int r)
{
    return gc.op(Op::D, w).submatrix(gc.degree(r + 1), gc.degree(r));
}

static size_t dim(const GradedComplex& gc, Bidegree bd)
{
    return gc.block(bd).size();
}

Quotient de_rham_at(const GradedComplex& gc, size_t w, int r)
{
    return {kernel(degree_block(gc, w, r)), image(degree_block(gc, w, r - 1))};
}

Quotient dolbeault_cw_at(const GradedComplex& gc, size_t w, Bidegree bd)
{
    auto [p, q] = bd;
    Subspace ker_mubar = kernel(block(gc, Op::Mubar, w, bd));
    Subspace im_mubar = image(block(gc, Op::Mubar, w, {p + 1, q - 2}));
    Subspace im_mubar_next = image(block(gc, Op::Mubar, w, {p + 1, q - 1}));
    Subspace num = intersect({ker_mubar, preimage(block(gc, Op::Delbar, w, bd), im_mubar_next)});
    Subspace den = intersect({image(block(gc, Op::Delbar, w, {p, q - 1})), ker_mubar}).sum(im_mubar);
    return {num, den};
}

Subspace a_dol(const GradedComplex& gc, size_t w, Bidegree bd)
{
    if (!gc.valid(bd))
        return Subspace(0);
    auto [p, q] = bd;
    ExactMatrix delbar = block(gc, Op::Delbar, w, bd);
    return intersect({
        kernel(block(gc, Op::Mu, w, bd)),
        kernel(block(gc, Op::Mubar, w, bd)),
        kernel(block(gc, Op::Delbar, w, {p, q + 1}) * delbar),
        kernel(block(gc, Op::Mu, w, {p, q + 1}) * delbar),
    });
}

Quotient refined_dolbeault_at(const GradedComplex& gc, size_t w, Bidegree bd)
{
    auto [p, q] = bd;
    Subspace num = intersect({kernel(block(gc, Op::Delbar, w, bd)), a_dol(gc, w, bd)});
    Subspace den = image_of(block(gc, Op::Delbar, w, {p, q - 1}), a_dol(gc, w, {p, q - 1}));
    return {num, den};
}

static ExactMatrix paired_operator(const GradedComplex& gc, size_t w)
{
    return ExactMatrix::vstack({
        ExactMatrix::hstack({block(gc, Op::Del, w, {1, 0}), block(gc, Op::Mu, w, {0, 1})}),
        ExactMatrix::hstack({block(gc, Op::Mubar, w, {1, 0}), block(gc, Op::Delbar, w, {0, 1})}),
    });
}

Subspace paired_kernel(const GradedComplex& gc, size_t w)
{
    return kernel(paired_operator(gc, w));
}

Quotient hat_h01_at(const GradedComplex& gc, size_t w)
{
    size_t d10 = dim(gc, {1, 0}), d01 = dim(gc, {0, 1});
    Subspace pairs = paired_kernel(gc, w);
    std::vector<Vec> second;
    for (const Vec& v : pairs.basis())
        second.emplace_back(v.begin() + d10, v.end());
    return {Subspace::span(d01, second), image(block(gc, Op::Delbar, w, {0, 0}))};
}

Quotient hat_h1_at(const GradedComplex& gc, size_t w, bool diagonal)
{
    ExactMatrix T = paired_operator(gc, w);
    ExactMatrix del = block(gc, Op::Del, w, {0, 0});
    ExactMatrix delbar = block(gc, Op::Delbar, w, {0, 0});
    ExactMatrix potentials = diagonal ? ExactMatrix::vstack({del, delbar}) : ExactMatrix::block_diagonal({del, delbar});
    return {kernel(T), image_of(potentials, kernel(T * potentials))};
}

Subspace harmonic_at(const MetricTools& mt, const std::vector<Op>& ops, size_t w, Bidegree bd)
{
    const GradedComplex& gc = mt.complex();
    std::vector<Subspace> parts{Subspace::full(dim(gc, bd))};
    for (Op o : ops) {
        Bidegree s = op_shift(o);
        parts.push_back(kernel(block(gc, o, w, bd)));
        parts.push_back(kernel(gc.restrict(mt.adjoint(o, w), bd, {bd.p - s.p, bd.q - s.q})));
    }
    return intersect(parts);
}

size_t de_rham(const GradedComplex& gc, int r)
{
    return sum_weights(gc, [&](size_t w) { return de_rham_at(gc, w, r).dim(); });
}

size_t dolbeault_cw(const GradedComplex& gc, Bidegree bd)
{
    return sum_weights(gc, [&](size_t w) { return dolbeault_cw_at(gc, w, bd).dim(); });
}

size_t refined_dolbeault(const GradedComplex& gc, Bidegree bd)
{
    return sum_weights(gc, [&](size_t w) { return refined_dolbeault_at(gc, w, bd).dim(); });
}

size_t hat_h01(const GradedComplex& gc)
{
    return sum_weights(gc, [&](size_t w) { return hat_h01_at(gc, w).dim(); });
}

size_t hat_h1(const GradedComplex& gc, bool diagonal)
{
    return sum_weights(gc, [&](size_t w) { return hat_h1_at(gc, w, diagonal).dim(); });
}

size_t harmonic_dim(const MetricTools& mt, const std::vector<Op>& ops, Bidegree bd)
{
    return sum_weights(mt.complex(), [&](size_t w) { return harmonic_at(mt, ops, w, bd).dim(); });
}

size_t ell(const MetricTools& mt, Bidegree bd)
{
    return harmonic_dim(mt, {Op::Delbar, Op::Mu}, bd);
}

static Subspace closed_11(const GradedComplex& gc, size_t w)
{
    return kernel(gc.op(Op::D, w).submatrix(gc.degree(3), gc.block({1, 1})));
}

Quotient h11_dr_at(const GradedComplex& gc, size_t w)
{
    // d x lies in A^{1,1} iff its other degree-2 components vanish
    std::vector<size_t> other;
    const auto& b11 = gc.block({1, 1});
    for (size_t k : gc.degree(2))
        if (std::find(b11.begin(), b11.end(), k) == b11.end())
            other.push_back(k);
    const ExactMatrix& D = gc.op(Op::D, w);
    auto ones = gc.degree(1);
    Subspace lands = kernel(D.submatrix(other, ones));
    return {closed_11(gc, w), image_of(D.submatrix(b11, ones), lands)};
}

Quotient h11_bc_at(const GradedComplex& gc, size_t w)
{
    // dd^c f = 2i∂∂̄f + 2iμ∂̄f + 2i∂̄²f, so dd^c f is of type (1,1) exactly on A^0_Dol
    ExactMatrix ddbar = block(gc, Op::Del, w, {0, 1}) * block(gc, Op::Delbar, w, {0, 0});
    return {closed_11(gc, w), image_of(ddbar, a_dol(gc, w, {0, 0}))};
}

Quotient h11_ddc_at(const GradedComplex& gc, size_t w)
{
    ExactMatrix ddbar = block(gc, Op::Del, w, {1, 2}) * block(gc, Op::Delbar, w, {1, 1});
    ExactMatrix d11 = ExactMatrix::hstack({block(gc, Op::Delbar, w, {1, 0}), block(gc, Op::Del, w, {0, 1})});
    return {kernel(ddbar), image(d11)};
}

Special11 special_11_quotients(const GradedComplex& gc)
{
    Special11 s;
    s.h11_dR = sum_weights(gc, [&](size_t w) { return h11_dr_at(gc, w).dim(); });
    s.h11_BC = sum_weights(gc, [&](size_t w) { return h11_bc_at(gc, w).dim(); });
    if (gc.n() == 2)
        s.h11_ddc = sum_weights(gc, [&](size_t w) { return h11_ddc_at(gc, w).dim(); });
    return s;
}

DiamondLevel diamond_level(const GradedComplex& gc, const MetricTools* mt)
{
    DiamondLevel lv;
    lv.truncation = gc.model().invariant() ? -1 : gc.model().truncation;
    int n = int(gc.n());
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            lv.h[{p, q}] = dolbeault_cw(gc, {p, q});
            lv.h_tilde[{p, q}] = refined_dolbeault(gc, {p, q});
            if (mt)
                lv.ell[{p, q}] = ell(*mt, {p, q});
        }
    for (int r = 0; r <= 2 * n; ++r)
        lv.b.push_back(de_rham(gc, r));
    lv.hat_h01 = hat_h01(gc);
    lv.hat_h1 = hat_h1(gc);
    lv.hat_h1_diagonal = hat_h1(gc, true);
    lv.special = special_11_quotients(gc);
    return lv;
}

static std::string cell(const std::string& name, Bidegree bd)
{
    std::ostringstream os;
    os << name << "[" << bd.p << "," << bd.q << "]";
    return os.str();
}

HodgeDiamond diamond(const ComplexFrame& frame, const CoefficientModel& model, std::vector<int> truncations,
                     const std::optional<HermitianMetric>& metric)
{
    HodgeDiamond out;
    if (model.invariant() || truncations.empty())
        truncations = {model.invariant() ? 0 : model.truncation};
    std::sort(truncations.begin(), truncations.end());
    truncations.erase(std::unique(truncations.begin(), truncations.end()), truncations.end());
    for (int N : truncations) {
        CoefficientModel m = model;
        if (!m.invariant())
            m.truncation = N;
        GradedComplex gc(frame, m);
        std::optional<MetricTools> mt;
        if (metric)
            mt.emplace(gc, *metric);
        out.levels.push_back(diamond_level(gc, mt ? &*mt : nullptr));
    }
    if (out.levels.size() < 3)
        return out;

    std::vector<std::pair<std::string, std::vector<size_t>>> series;
    auto collect = [&](const std::string& name, auto get) {
        std::vector<size_t> v;
        for (const auto& lv : out.levels)
            v.push_back(get(lv));
        series.emplace_back(name, v);
    };
    int n = int(frame.n);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            Bidegree bd{p, q};
            collect(cell("h", bd), [&](const DiamondLevel& lv) { return lv.h.at(bd); });
            collect(cell("h_tilde", bd), [&](const DiamondLevel& lv) { return lv.h_tilde.at(bd); });
            if (metric)
                collect(cell("ell", bd), [&](const DiamondLevel& lv) { return lv.ell.at(bd); });
        }
    for (int r = 0; r <= 2 * n; ++r)
        collect("b[" + std::to_string(r) + "]", [&](const DiamondLevel& lv) { return lv.b[r]; });
    collect("hat_h01", [](const DiamondLevel& lv) { return lv.hat_h01; });
    collect("hat_h1", [](const DiamondLevel& lv) { return lv.hat_h1; });
    for (const auto& [name, v] : series) {
        bool grows = true;
        for (size_t k = 1; k < v.size(); ++k)
            grows = grows && v[k] > v[k - 1];
        if (grows)
            out.unbounded.push_back({name, v});
    }
    return out;
}

} // namespace acx
