#include "caatlas/grid.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace caatlas {

Grid::Grid(int64_t ox, int64_t oy, int64_t width, int64_t height)
    : ox_(ox), oy_(oy), w_(width), h_(height), words_((width + 63) / 64) {
    bits_.assign(size_t(words_ * h_), 0);
}

bool Grid::in_region(int64_t x, int64_t y) const {
    return x >= ox_ && x < ox_ + w_ && y >= oy_ && y < oy_ + h_;
}

bool Grid::get(int64_t x, int64_t y) const {
    if (!in_region(x, y)) return false;
    int64_t c = x - ox_, r = y - oy_;
    return (row(r)[c >> 6] >> (c & 63)) & 1;
}

void Grid::set(int64_t x, int64_t y, bool alive) {
    if (!in_region(x, y))
        throw std::out_of_range("Grid::set outside stored region");
    int64_t c = x - ox_, r = y - oy_;
    uint64_t bit = uint64_t(1) << (c & 63);
    if (alive)
        row(r)[c >> 6] |= bit;
    else
        row(r)[c >> 6] &= ~bit;
}

BoundingBox Grid::live_bounds() const {
    BoundingBox bb;
    int64_t min_c = w_, max_c = -1;
    for (int64_t r = 0; r < h_; ++r) {
        const uint64_t* p = row(r);
        bool any = false;
        for (int64_t i = 0; i < words_; ++i) {
            uint64_t w = p[i];
            if (!w) continue;
            any = true;
            min_c = std::min(min_c, i * 64 + std::countr_zero(w));
            max_c = std::max(max_c, i * 64 + 63 - std::countl_zero(w));
        }
        if (any) {
            if (bb.empty) {
                bb.y0 = r;
                bb.empty = false;
            }
            bb.y1 = r;
        }
    }
    if (bb.empty) return bb;
    bb.x0 = ox_ + min_c;
    bb.x1 = ox_ + max_c;
    bb.y0 += oy_;
    bb.y1 += oy_;
    return bb;
}

uint64_t Grid::population() const {
    uint64_t n = 0;
    for (uint64_t w : bits_) n += std::popcount(w);
    return n;
}

std::vector<std::pair<int64_t, int64_t>> Grid::live_cells() const {
    std::vector<std::pair<int64_t, int64_t>> out;
    for (int64_t r = 0; r < h_; ++r) {
        const uint64_t* p = row(r);
        for (int64_t i = 0; i < words_; ++i) {
            uint64_t w = p[i];
            while (w) {
                int b = std::countr_zero(w);
                out.emplace_back(ox_ + i * 64 + b, oy_ + r);
                w &= w - 1;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void Grid::ensure_margin(int64_t margin) {
    BoundingBox bb = live_bounds();
    if (bb.empty) return;
    int64_t left = (bb.x0 - ox_) >= margin
                       ? 0
                       : (margin - (bb.x0 - ox_) + 63) / 64 * 64;
    int64_t right = (ox_ + w_ - 1 - bb.x1) >= margin
                        ? 0
                        : (margin - (ox_ + w_ - 1 - bb.x1) + 63) / 64 * 64;
    int64_t top = std::max<int64_t>(0, margin - (bb.y0 - oy_));
    int64_t bottom = std::max<int64_t>(0, margin - (oy_ + h_ - 1 - bb.y1));
    if (!left && !right && !top && !bottom) return;

    Grid grown(ox_ - left, oy_ - top, w_ + left + right, h_ + top + bottom);
    grown.generation_ = generation_;
    int64_t word_off = left / 64;  // rows stay word-aligned
    for (int64_t r = 0; r < h_; ++r) {
        const uint64_t* src = row(r);
        uint64_t* dst = grown.row(r + top) + word_off;
        std::copy(src, src + words_, dst);
    }
    *this = std::move(grown);
}

namespace {

void require_b0_free(const Rule& rule) {
    if (rule.has_born(0))
        throw std::invalid_argument(
            "engine only runs B0-free rules; classify() the rule first");
}

// Per-word full adder over west/center/east aligned bits: count in 0..3
// as two bit planes.
inline void triple_row(const uint64_t* p, int64_t words, uint64_t* t0,
                       uint64_t* t1) {
    for (int64_t i = 0; i < words; ++i) {
        uint64_t x = p[i];
        uint64_t west = (x << 1) | (i > 0 ? p[i - 1] >> 63 : 0);
        uint64_t east = (x >> 1) | (i + 1 < words ? p[i + 1] << 63 : 0);
        t0[i] = west ^ x ^ east;
        t1[i] = (west & x) | ((west ^ x) & east);
    }
}

}  // namespace

Grid step(const Grid& grid, const Rule& rule) {
    require_b0_free(rule);
    Grid src = grid;
    src.ensure_margin(2);
    Grid out(src.origin_x(), src.origin_y(), src.width(), src.height());
    out.set_generation(grid.generation() + 1);
    const int64_t h = src.height(), words = src.words_per_row();
    if (h < 3 || words == 0) return out;

    // Triple counts (west+center+east) for every row as bit planes.
    std::vector<uint64_t> t0(size_t(h * words)), t1(size_t(h * words));
    for (int64_t r = 0; r < h; ++r)
        triple_row(src.row(r), words, t0.data() + r * words,
                   t1.data() + r * words);

    for (int64_t r = 1; r + 1 < h; ++r) {
        const uint64_t* cur = src.row(r);
        const uint64_t* a0 = t0.data() + (r - 1) * words;
        const uint64_t* a1 = t1.data() + (r - 1) * words;
        const uint64_t* c0 = t0.data() + (r + 1) * words;
        const uint64_t* c1 = t1.data() + (r + 1) * words;
        uint64_t* dst = out.row(r);
        for (int64_t i = 0; i < words; ++i) {
            uint64_t x = cur[i];
            // Horizontal pair of the center row (excludes the cell itself).
            uint64_t west = (x << 1) | (i > 0 ? cur[i - 1] >> 63 : 0);
            uint64_t east = (x >> 1) | (i + 1 < words ? cur[i + 1] << 63 : 0);
            uint64_t b0 = west ^ east;
            uint64_t b1 = west & east;

            // Neighbour count = triple(above) + pair(center) + triple(below),
            // carry-save summed into four bit planes n0..n3 (0..8).
            uint64_t n0 = a0[i] ^ b0 ^ c0[i];
            uint64_t car0 = (a0[i] & b0) | ((a0[i] ^ b0) & c0[i]);
            uint64_t u = a1[i] ^ b1, cu = a1[i] & b1;
            uint64_t v = c1[i] ^ car0, cv = c1[i] & car0;
            uint64_t n1 = u ^ v, cw = u & v;
            uint64_t n2 = cu ^ cv ^ cw;
            uint64_t n3 = (cu & cv) | ((cu ^ cv) & cw);

            uint64_t next = 0;
            uint16_t active = rule.born | rule.survive;
            for (int k = 0; k <= 8; ++k) {
                if (!((active >> k) & 1)) continue;
                uint64_t eq = ((k & 1) ? n0 : ~n0) & ((k & 2) ? n1 : ~n1) &
                              ((k & 4) ? n2 : ~n2) & ((k & 8) ? n3 : ~n3);
                if (rule.has_born(k)) next |= eq & ~x;
                if (rule.has_survive(k)) next |= eq & x;
            }
            dst[i] = next;
        }
    }
    return out;
}

Grid step_reference(const Grid& grid, const Rule& rule) {
    require_b0_free(rule);
    Grid src = grid;
    src.ensure_margin(2);
    Grid out(src.origin_x(), src.origin_y(), src.width(), src.height());
    out.set_generation(grid.generation() + 1);
    for (int64_t y = src.origin_y() + 1; y < src.origin_y() + src.height() - 1;
         ++y) {
        for (int64_t x = src.origin_x() + 1;
             x < src.origin_x() + src.width() - 1; ++x) {
            int count = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (dx || dy) count += src.get(x + dx, y + dy);
            bool alive = src.get(x, y);
            bool next = alive ? rule.has_survive(count) : rule.has_born(count);
            if (next) out.set(x, y, true);
        }
    }
    return out;
}

int neighbour_count(const Grid& grid, int64_t x, int64_t y) {
    if (!grid.in_region(x, y))
        throw std::out_of_range("neighbour_count outside stored region");
    int count = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (dx || dy) count += grid.get(x + dx, y + dy);
    return count;
}

bool same_live_cells(const Grid& a, const Grid& b) {
    return a.live_cells() == b.live_cells();
}

std::string dump(const Grid& grid) {
    BoundingBox bb = grid.live_bounds();
    if (bb.empty) return "";
    std::string out;
    for (int64_t y = bb.y0; y <= bb.y1; ++y) {
        for (int64_t x = bb.x0; x <= bb.x1; ++x)
            out += grid.get(x, y) ? 'o' : '.';
        out += '\n';
    }
    return out;
}

}  // namespace caatlas
