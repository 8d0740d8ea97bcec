#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace geovec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;     // unreadable or malformed input
inline constexpr int kExitData = 3;      // input readable but unusable (zero area, too few entities, k too large)
inline constexpr int kExitUsage = 64;

/// Runs the tool with args excluding the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes to `<path>.partial` and renames onto `path` on commit(). An uncommitted file is
/// removed on destruction, so a failed command leaves no output behind.
class AtomicOutput {
public:
    explicit AtomicOutput(std::filesystem::path path);
    ~AtomicOutput();
    AtomicOutput(const AtomicOutput&) = delete;
    AtomicOutput& operator=(const AtomicOutput&) = delete;

    std::ofstream& stream() noexcept { return stream_; }
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path temp_;
    std::ofstream stream_;
    bool committed_ = false;
};

}  // namespace geovec::cli
