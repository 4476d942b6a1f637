#pragma once

#include <gtest/gtest.h>

#include <random>

#include "sos/error.hpp"
#include "sos/lattice.hpp"
#include "sos/series.hpp"

#define EXPECT_SOS_ERROR(stmt, expected_code)                                      \
    do {                                                                           \
        try {                                                                      \
            stmt;                                                                  \
            ADD_FAILURE() << "expected " << sos::error_name(expected_code);        \
        } catch (const sos::Error& e) {                                            \
            EXPECT_EQ(e.code(), expected_code) << e.what();                        \
        }                                                                          \
    } while (0)

namespace sos {

inline void PrintTo(const Series& s, std::ostream* os) { *os << s.pretty(); }

}  // namespace sos

namespace sos::testing {

inline HeightConfig random_config(std::mt19937_64& rng, int max_side, int max_height, int max_boundary) {
    std::uniform_int_distribution<int> side(1, max_side), level(0, max_boundary), hd(0, max_height);
    Box box{side(rng), side(rng), level(rng)};
    HeightConfig c(box);
    for (int& h : c.heights) h = hd(rng);
    return c;
}

inline double relative_gap(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace sos::testing
