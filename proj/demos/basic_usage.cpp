#include <iostream>

#include "latinlab/latinlab.hpp"

// Counts intercalates of a sampled square, applies a flip and checks the
// matching sandwich for one small regular graph.
int main() {
    using namespace latinlab;

    SampleConfig cfg;
    cfg.n = 8;
    cfg.seed = 7;
    cfg.sample_count = 1;
    const LatinSquare L = sample(cfg).front();
    std::cout << "sampled square:\n" << to_text(L);
    std::cout << "intercalates: " << count_intercalates(L) << '\n';

    const CycleStructure sigma = leading_sigma(L);
    std::cout << "rows 1-2 cycle type:";
    for (int len : sigma.cycle_type()) std::cout << ' ' << len;
    std::cout << '\n';

    for (int x = 0; x < L.order(); ++x) {
        for (int y = x + 1; y < L.order(); ++y) {
            if (!is_flippable(L, x, y) || sigma.same_cycle(x, y)) continue;
            const LatinSquare f = flip(L, x, y);
            std::cout << "flip columns " << x + 1 << ", " << y + 1 << " merges two cycles; new cycle type:";
            for (int len : leading_sigma(f).cycle_type()) std::cout << ' ' << len;
            std::cout << '\n';
            x = y = L.order();
        }
    }

    const Matrix g = q_graph(L, {0, 1, 2}).biadjacency;
    const SandwichCase s = sandwich_case(g, 3);
    std::cout << "G_Q for Q = {1, 2, 3}: log lower " << s.log_lower << " <= log per " << s.log_permanent << " <= log upper " << s.log_upper
              << (s.holds ? " (holds)" : " (fails)") << '\n';
    return s.holds ? 0 : 1;
}
