#include "fmm/arch.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fmm {

void ArchParams::validate() const {
    if (mC == 0 || kC == 0 || nC == 0 || mR == 0 || nR == 0)
        throw std::invalid_argument("arch '" + name + "': block sizes must be positive");
    if (mC % mR != 0) throw std::invalid_argument("arch '" + name + "': mc must be a multiple of mr");
    if (nC % nR != 0) throw std::invalid_argument("arch '" + name + "': nc must be a multiple of nr");
    if (mR > kMaxRegisterBlock || nR > kMaxRegisterBlock)
        throw std::invalid_argument("arch '" + name + "': mr/nr exceed " + std::to_string(kMaxRegisterBlock));
    if (!(peakGflops > 0.0) || !(bandwidthGBs > 0.0))
        throw std::invalid_argument("arch '" + name + "': peak_gflops and bandwidth_gbs must be positive");
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::size_t to_size(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || x <= 0) throw std::invalid_argument("arch key '" + key + "': bad value '" + v + "'");
    return static_cast<std::size_t>(x);
}

double to_number(const std::string& key, const std::string& v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size()) throw std::invalid_argument("arch key '" + key + "': bad value '" + v + "'");
    return x;
}

}  // namespace

ArchParams parse_arch(std::string_view text) {
    ArchParams arch;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
        const std::string t = trim(raw);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("arch line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key == "name") arch.name = value;
        else if (key == "peak_gflops") arch.peakGflops = to_number(key, value);
        else if (key == "bandwidth_gbs") arch.bandwidthGBs = to_number(key, value);
        else if (key == "mc") arch.mC = to_size(key, value);
        else if (key == "kc") arch.kC = to_size(key, value);
        else if (key == "nc") arch.nC = to_size(key, value);
        else if (key == "mr") arch.mR = to_size(key, value);
        else if (key == "nr") arch.nR = to_size(key, value);
        else throw std::invalid_argument("arch line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    arch.validate();
    return arch;
}

ArchParams load_arch(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read arch file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_arch(buf.str());
}

std::string serialize_arch(const ArchParams& arch) {
    std::ostringstream out;
    out.precision(17);
    out << "name = " << arch.name << '\n'
        << "peak_gflops = " << arch.peakGflops << '\n'
        << "bandwidth_gbs = " << arch.bandwidthGBs << '\n'
        << "mc = " << arch.mC << '\n'
        << "kc = " << arch.kC << '\n'
        << "nc = " << arch.nC << '\n'
        << "mr = " << arch.mR << '\n'
        << "nr = " << arch.nR << '\n';
    return out.str();
}

}  // namespace fmm
