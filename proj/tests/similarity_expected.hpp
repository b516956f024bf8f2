#pragma once

#include <array>
#include <string_view>

namespace testutil {

/// The reference language-similarity table: per-feature cosine percents
/// (2 decimals), per-feature ranks, and the averaged rank score, for all
/// 37 languages against English. Feature order: syntactic, phonological,
/// inventory, family, geographic.
struct SimilarityExpectation {
    std::string_view code;
    std::array<double, 5> sim;
    std::array<int, 5> rank;
    double rank_score;
};

inline constexpr std::array<SimilarityExpectation, 37> kExpectedSimilarity = {{
    {"nld", {92.43, 81.83, 76.28, 44.51, 99.96}, {37, 18, 36, 35, 37}, 32.6},
    {"deu", {90.26, 80.60, 78.68, 54.49, 99.76}, {36, 15, 37, 37, 35}, 32.0},
    {"ukr", {84.73, 85.83, 74.91, 15.03, 99.28}, {32, 32, 33, 30, 26}, 30.6},
    {"por", {84.24, 90.46, 74.03, 10.14, 99.68}, {31, 35, 28, 22, 33}, 29.8},
    {"ell", {78.31, 95.35, 74.74, 15.03, 98.96}, {25, 37, 32, 32, 22}, 29.6},
    {"pol", {78.64, 85.83, 74.09, 15.03, 99.63}, {26, 29, 29, 31, 32}, 29.4},
    {"bul", {85.78, 85.83, 74.38, 13.73, 99.01}, {35, 30, 30, 27, 23}, 29.0},
    {"ita", {85.78, 85.83, 72.94, 11.21, 99.53}, {34, 28, 26, 23, 30}, 28.2},
    {"rus", {81.18, 85.83, 74.63, 16.80, 95.81}, {29, 31, 31, 33, 17}, 28.2},
    {"ron", {79.60, 90.46, 73.42, 11.89, 99.22}, {27, 34, 27, 24, 25}, 27.4},
    {"spa", {82.16, 85.83, 72.83, 9.71, 99.59}, {30, 27, 25, 21, 31}, 26.8},
    {"lit", {69.33, 80.42, 75.58, 19.39, 99.44}, {18, 14, 34, 34, 27}, 25.4},
    {"afr", {84.94, 81.83, 75.91, 50.46, 86.84}, {33, 17, 35, 36, 6}, 25.4},
    {"fra", {81.18, 75.28, 72.24, 9.71, 99.93}, {28, 7, 24, 20, 36}, 23.0},
    {"est", {77.35, 85.83, 70.81, 0.23, 99.45}, {24, 25, 19, 15, 28}, 22.2},
    {"hun", {69.40, 85.83, 70.66, 0.33, 99.46}, {19, 24, 18, 18, 29}, 21.6},
    {"fin", {71.08, 87.05, 70.00, 0.19, 99.19}, {21, 33, 17, 13, 24}, 21.6},
    {"eus", {62.36, 85.29, 70.00, 3.33, 99.76}, {13, 21, 16, 19, 34}, 20.6},
    {"urd", {61.63, 85.83, 71.98, 12.71, 92.54}, {12, 26, 23, 25, 13}, 19.8},
    {"mar", {56.50, 80.42, 71.57, 13.73, 89.80}, {8, 13, 22, 28, 11}, 16.4},
    {"wol", {63.92, 85.83, 69.73, 0.17, 96.24}, {14, 23, 15, 10, 18}, 16.0},
    {"hin", {61.63, 78.35, 70.91, 12.71, 91.10}, {11, 10, 20, 26, 12}, 15.8},
    {"fas", {50.03, 78.35, 70.94, 13.73, 94.23}, {3, 11, 21, 29, 14}, 15.6},
    {"ind", {72.66, 90.92, 67.09, 0.12, 79.16}, {22, 36, 12, 4, 1}, 15.0},
    {"heb", {75.15, 72.55, 69.10, 0.13, 97.16}, {23, 5, 14, 6, 20}, 13.6},
    {"ara", {65.11, 70.09, 68.38, 0.15, 97.04}, {16, 3, 13, 9, 19}, 12.0},
    {"tur", {50.68, 81.83, 67.09, 0.14, 98.25}, {4, 16, 11, 7, 21}, 11.8},
    {"zho", {71.08, 72.55, 66.94, 0.33, 88.42}, {20, 4, 10, 16, 9}, 11.8},
    {"kaz", {44.77, 83.64, 66.59, 0.14, 95.22}, {1, 19, 9, 8, 16}, 10.6},
    {"vie", {66.04, 78.35, 65.81, 0.19, 85.25}, {17, 9, 8, 11, 3}, 9.6},
    {"tel", {52.07, 80.42, 64.76, 0.19, 89.18}, {6, 12, 4, 14, 10}, 9.2},
    {"tgl", {60.89, 85.83, 64.76, 0.13, 82.15}, {10, 22, 5, 5, 2}, 8.8},
    {"tam", {51.36, 85.29, 64.37, 0.11, 87.95}, {5, 20, 3, 3, 8}, 7.8},
    {"kor", {55.29, 74.65, 63.83, 0.33, 86.93}, {7, 6, 2, 17, 7}, 7.8},
    {"tha", {63.95, 78.35, 65.40, 0.11, 85.25}, {15, 8, 7, 2, 4}, 7.2},
    {"yor", {60.04, 66.77, 65.29, 0.10, 94.98}, {9, 2, 6, 1, 15}, 6.6},
    {"jpn", {50.03, 66.77, 56.88, 0.19, 85.65}, {2, 1, 1, 12, 5}, 4.2},
}};

}  // namespace testutil
