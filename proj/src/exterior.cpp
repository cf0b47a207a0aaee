#include "acx/exterior.hpp"

#include <algorithm>

namespace acx {

int wedge_sign(Mask a, Mask b)
{
    if (a & b)
        return 0;
    // each slot of b must hop over the slots of a above it
    int swaps = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        unsigned s = std::countr_zero(rest);
        Mask above = (s + 1 >= 32) ? 0u : (a >> (s + 1));
        swaps += std::popcount(above);
    }
    return (swaps % 2) ? -1 : 1;
}

MonoForm wedge(const MonoForm& a, const MonoForm& b)
{
    MonoForm out;
    for (const auto& [ma, va] : a)
        for (const auto& [mb, vb] : b) {
            int s = wedge_sign(ma, mb);
            if (s == 0)
                continue;
            Scalar v = va * vb;
            if (s < 0)
                v = -v;
            accumulate(out, {{ma | mb, v}});
        }
    return out;
}

void accumulate(MonoForm& into, const MonoForm& f, const Scalar& scale)
{
    for (const auto& [m, v] : f) {
        Scalar add = v * scale;
        auto it = into.find(m);
        if (it == into.end()) {
            if (!add.is_zero())
                into.emplace(m, add);
            continue;
        }
        it->second += add;
        if (it->second.is_zero())
            into.erase(it);
    }
}

MonoForm scale(const MonoForm& f, const Scalar& s)
{
    MonoForm out;
    accumulate(out, f, s);
    return out;
}

bool is_zero(const MonoForm& f)
{
    return std::all_of(f.begin(), f.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

MonoForm apply_derivation(const std::vector<MonoForm>& on_generators, Mask monomial)
{
    // D(g1∧...∧gr) = Σ (-1)^k g1∧..∧D(gk)∧..∧gr
    MonoForm out;
    int k = 0;
    for (Mask rest = monomial; rest; rest &= rest - 1, ++k) {
        unsigned s = std::countr_zero(rest);
        Mask before = monomial & ((1u << s) - 1);
        Mask after = monomial & ~((1u << (s + 1)) - 1);
        MonoForm piece = wedge(wedge({{before, Scalar(1)}}, on_generators[s]), {{after, Scalar(1)}});
        accumulate(out, piece, Scalar(k % 2 ? -1 : 1));
    }
    return out;
}

MonoForm apply_derivation(const std::vector<MonoForm>& on_generators, const MonoForm& f)
{
    MonoForm out;
    for (const auto& [m, v] : f)
        accumulate(out, apply_derivation(on_generators, m), v);
    return out;
}

std::vector<Mask> subsets(unsigned size, unsigned count)
{
    std::vector<Mask> out;
    std::vector<unsigned> idx(count);
    for (unsigned k = 0; k < count; ++k)
        idx[k] = k;
    if (count > size)
        return out;
    while (true) {
        Mask m = 0;
        for (unsigned v : idx)
            m |= 1u << v;
        out.push_back(m);
        int k = static_cast<int>(count) - 1;
        while (k >= 0 && idx[k] == size - count + k)
            --k;
        if (k < 0)
            break;
        ++idx[k];
        for (unsigned j = k + 1; j < count; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

} // namespace acx
