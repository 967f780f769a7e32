#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "caatlas/rules.hpp"

namespace caatlas {

// Inclusive bounding box of live cells. empty == true means no live cell.
struct BoundingBox {
    int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool empty = true;

    int64_t width() const { return empty ? 0 : x1 - x0 + 1; }
    int64_t height() const { return empty ? 0 : y1 - y0 + 1; }
};

// Finite growable two-state cell field, rows packed 64 cells per word.
// Live cells always stay strictly inside the stored region (dead border
// ring); the region grows as patterns expand.
class Grid {
public:
    Grid() = default;
    Grid(int64_t ox, int64_t oy, int64_t width, int64_t height);

    bool get(int64_t x, int64_t y) const;  // outside region reads as dead
    void set(int64_t x, int64_t y, bool alive);  // must be inside region

    bool in_region(int64_t x, int64_t y) const;

    int64_t origin_x() const { return ox_; }
    int64_t origin_y() const { return oy_; }
    int64_t width() const { return w_; }
    int64_t height() const { return h_; }
    int64_t generation() const { return generation_; }
    void set_generation(int64_t g) { generation_ = g; }

    BoundingBox live_bounds() const;
    uint64_t population() const;
    std::vector<std::pair<int64_t, int64_t>> live_cells() const;  // sorted

    // Region grown so every live cell has at least `margin` dead cells to
    // each region edge. Horizontal growth is in whole words so rows stay
    // aligned.
    void ensure_margin(int64_t margin);

    const uint64_t* row(int64_t ry) const { return bits_.data() + ry * words_; }
    uint64_t* row(int64_t ry) { return bits_.data() + ry * words_; }
    int64_t words_per_row() const { return words_; }

private:
    int64_t ox_ = 0, oy_ = 0;
    int64_t w_ = 0, h_ = 0;
    int64_t words_ = 0;
    int64_t generation_ = 0;
    std::vector<uint64_t> bits_;
};

// One generation under a B0-free rule; bit-parallel kernel.
// Throws std::invalid_argument if the rule contains B0.
Grid step(const Grid& grid, const Rule& rule);

// Same contract as step, naive per-cell counting. Correctness oracle.
Grid step_reference(const Grid& grid, const Rule& rule);

// Live Moore neighbours of (x, y); (x, y) must be inside the stored
// region (throws std::out_of_range otherwise). Cells outside the region
// count as dead.
int neighbour_count(const Grid& grid, int64_t x, int64_t y);

bool same_live_cells(const Grid& a, const Grid& b);

// Plaintext dump over the live bounding box: '.' dead, 'o' live.
std::string dump(const Grid& grid);

}  // namespace caatlas
