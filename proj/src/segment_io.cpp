#include "pscomb/segment_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pscomb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_segments(std::ostream& out, const SegmentSet& sigma) {
    out << "x1,y1,x2,y2\n";
    char buf[128];
    for (const auto& s : sigma) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.a.x(), s.a.y(), s.b.x(), s.b.y());
        out << buf;
    }
}

void save_segments(const std::string& path, const SegmentSet& sigma) {
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot write segment file '" + path + "'");
    write_segments(out, sigma);
}

SegmentSet read_segments(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x1,y1,x2,y2")
        throw ParameterError("segment file must start with the header x1,y1,x2,y2");
    std::vector<Segment> segs;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty()) continue;
        double v[4];
        std::stringstream ss(line);
        std::string field;
        int k = 0;
        while (std::getline(ss, field, ',')) {
            field = trim(field);
            char* end = nullptr;
            if (k >= 4) throw ParameterError("too many fields on segment row " + std::to_string(row));
            v[k] = std::strtod(field.c_str(), &end);
            if (field.empty() || *end != '\0') throw ParameterError("bad number on segment row " + std::to_string(row));
            ++k;
        }
        if (k != 4) throw ParameterError("segment row " + std::to_string(row) + " needs 4 fields");
        segs.push_back(Segment{Point(v[0], v[1]), Point(v[2], v[3])});
    }
    return SegmentSet(std::move(segs));
}

SegmentSet load_segments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open segment file '" + path + "'");
    return read_segments(in);
}

}  // namespace pscomb
