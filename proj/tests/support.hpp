#ifndef VIBCLUST_TESTS_SUPPORT_HPP
#define VIBCLUST_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vibclust/matrix.hpp"
#include "vibclust/random.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("vibclust-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::vector<double> random_vector(vibclust::Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> out(n);
    for (auto& v : out) {
        v = scale * rng.normal();
    }
    return out;
}

inline vibclust::Matrix random_matrix(vibclust::Rng& rng, std::size_t rows, std::size_t cols) {
    vibclust::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = rng.normal();
        }
    }
    return m;
}

inline std::vector<std::vector<double>> to_rows(const vibclust::Matrix& m) {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out.emplace_back(m.row(r).begin(), m.row(r).end());
    }
    return out;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace testing

#endif  // VIBCLUST_TESTS_SUPPORT_HPP
