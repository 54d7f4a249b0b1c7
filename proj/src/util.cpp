#include "fdim/util.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace fracdim {

double log_sum_exp(const std::vector<double>& a) {
    if (a.empty()) return -std::numeric_limits<double>::infinity();
    double mx = *std::max_element(a.begin(), a.end());
    if (mx == -std::numeric_limits<double>::infinity()) return mx;
    double s = 0.0;
    for (double v : a) s += std::exp(v - mx);
    return mx + std::log(s);
}

double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) {
        if (v < 0.0) throw domain_error("entropy: negative mass");
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

std::string fmt_g(double v, int sig) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig, v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out.write(content.data(), (std::streamsize)content.size());
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed for " + path);
    }
}

}  // namespace fracdim
