#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asrsel/io.hpp"

namespace asrsel::testing {

namespace fs = std::filesystem;

inline fs::path test_root() { return fs::path(ASRSEL_TEST_ROOT); }
inline fs::path fixture(const std::string& rel) { return test_root() / "fixtures" / rel; }
inline fs::path golden(const std::string& rel) { return test_root() / "golden" / rel; }

inline bool update_goldens() {
  const char* v = std::getenv("ASRSEL_UPDATE_GOLDEN");
  return v != nullptr && std::string(v) == "1";
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "asrsel-test-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) { return io::read_file(p); }

inline void spit(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

inline std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately use different formulations from the
// library code they check.

/// Edit distance by the textbook recursion over suffixes, memoized.
template <class Token>
std::size_t oracle_edit_distance(const std::vector<Token>& a, const std::vector<Token>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::ptrdiff_t small[100];
  std::vector<std::ptrdiff_t> large;
  std::ptrdiff_t* memo = small;
  if ((n + 1) * (m + 1) > 100) {
    large.resize((n + 1) * (m + 1));
    memo = large.data();
  }
  std::fill(memo, memo + (n + 1) * (m + 1), -1);
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == n) return m - j;
    if (j == m) return n - i;
    auto& slot = memo[i * (m + 1) + j];
    if (slot >= 0) return static_cast<std::size_t>(slot);
    std::size_t best = self(self, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, self(self, i + 1, j) + 1);
    best = std::min(best, self(self, i, j + 1) + 1);
    slot = static_cast<std::ptrdiff_t>(best);
    return best;
  };
  return rec(rec, 0, 0);
}

/// Two-pass Pearson in long double.
inline double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

}  // namespace asrsel::testing
