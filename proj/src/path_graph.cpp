#include "unfolder/path_graph.hpp"

#include <algorithm>

namespace unfolder {

namespace {

// Generic chain builder over the primary axis. For the vertical orientation
// the primary axis is y and the secondary is x; transposed otherwise.
std::vector<PathGraph> build_chains(const EdgeMap& em, bool vertical) {
    const int primary = vertical ? em.height : em.width;
    const int secondary = vertical ? em.width : em.height;
    auto value = [&](int p, int s) { return vertical ? em.at(p, s) : em.at(s, p); };

    std::vector<PathGraph> chains;
    // Chain tail positions of the previous primary level: secondary -> chain id.
    std::vector<int> prev_tail(secondary, -1);
    std::vector<int> cur_tail(secondary, -1);
    std::vector<char> claimed;

    for (int p = 0; p < primary; ++p) {
        std::fill(cur_tail.begin(), cur_tail.end(), -1);
        claimed.assign(secondary, 0);
        for (int s = 0; s < secondary; ++s) {
            if (value(p, s) == 0.0f) continue;
            int chain = -1;
            for (int ds : {0, -1, 1}) {  // prefer straight continuation
                const int ps = s + ds;
                if (ps < 0 || ps >= secondary) continue;
                if (prev_tail[ps] >= 0 && !claimed[ps]) {
                    chain = prev_tail[ps];
                    claimed[ps] = 1;
                    break;
                }
            }
            if (chain < 0) {
                chain = static_cast<int>(chains.size());
                chains.push_back(PathGraph{vertical ? EdgeMap::Orientation::vertical
                                                    : EdgeMap::Orientation::horizontal,
                                           {}});
            }
            chains[chain].pixels.push_back(vertical ? PixelCoord{s, p} : PixelCoord{p, s});
            cur_tail[s] = chain;
        }
        std::swap(prev_tail, cur_tail);
    }
    return chains;
}

}  // namespace

std::vector<PathGraph> path_graphs(const EdgeMap& em) {
    return build_chains(em, em.orientation == EdgeMap::Orientation::vertical);
}

}  // namespace unfolder
