#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace testutil {

inline std::string data_dir() { return DACSPEC_DATA_DIR; }
inline std::string data_file(const std::string& name) { return data_dir() + "/" + name; }

// fresh scratch directory, removed on destruction
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("dacspec_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

// run a shell command, capturing combined output
inline RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = ::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline std::string slurp(const std::string& path) {
    FILE* f = ::fopen(path.c_str(), "rb");
    if (!f) return {};
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = ::fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), got);
    ::fclose(f);
    return out;
}

}  // namespace testutil
