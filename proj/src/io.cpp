#include "rxnpack/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rxnpack/errors.hpp"

namespace rxn {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, p);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.good()) throw Error(ErrorKind::Io, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot rename into '" + path + "': " + ec.message());
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::ostringstream os;
    os << "time";
    for (const auto& sp : trajectory.species) os << "," << sp;
    os << "\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        os << format_double(trajectory.times[i]);
        for (double v : trajectory.rows[i]) os << "," << format_double(v);
        os << "\n";
    }
    return os.str();
}

std::string ensemble_summary_csv(const EnsembleStats& stats) {
    std::ostringstream os;
    os << "time";
    for (const auto& sp : stats.species) os << "," << sp << "_mean," << sp << "_std";
    os << "\n";
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
        os << format_double(stats.times[i]);
        for (std::size_t j = 0; j < stats.species.size(); ++j)
            os << "," << format_double(stats.mean[i][j]) << "," << format_double(stats.stddev[i][j]);
        os << "\n";
    }
    return os.str();
}

} // namespace rxn
