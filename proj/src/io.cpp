#include "disclab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace disclab {

using nlohmann::json;

ConvexBody body_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball") {
        int dim = j.value("dim", 2);
        return ConvexBody::ball(dim, j.at("radius").get<double>());
    }
    if (kind == "ellipsoid") {
        auto rows = j.at("matrix");
        int d = static_cast<int>(rows.size());
        if (d < 2 || d > 3) throw validation_error("ellipsoid matrix must be 2x2 or 3x3");
        Mat m(d, d);
        for (int i = 0; i < d; ++i) {
            if (static_cast<int>(rows[i].size()) != d)
                throw validation_error("ellipsoid matrix must be square");
            for (int c = 0; c < d; ++c) m(i, c) = rows[i][c].get<double>();
        }
        return ConvexBody::ellipsoid(m);
    }
    if (kind == "perturbed_ball") {
        double rho0 = j.at("rho0").get<double>();
        std::vector<PerturbMode> modes;
        int dim = 0;
        for (const auto& mj : j.at("modes")) {
            PerturbMode md;
            for (const auto& f : mj.at("freq")) md.freq.push_back(f.get<int>());
            md.amp = mj.at("amp").get<double>();
            int this_dim = static_cast<int>(md.freq.size()) + 1;
            if (dim == 0)
                dim = this_dim;
            else if (dim != this_dim)
                throw validation_error("perturbed_ball: inconsistent frequency shapes");
            modes.push_back(std::move(md));
        }
        if (dim == 0) dim = j.value("dim", 2);
        return ConvexBody::perturbed_ball(dim, rho0, std::move(modes));
    }
    throw validation_error("unknown body kind: " + kind);
}

ConvexBody load_body(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open body config: " + path);
    json j;
    in >> j;
    return body_from_json(j);
}

MeasureSpec measure_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirac") return MeasureSpec::dirac();
    if (kind == "uniform") return MeasureSpec::uniform();
    if (kind == "power") return MeasureSpec::power(j.at("alpha").get<double>());
    if (kind == "bump") return MeasureSpec::bump();
    throw validation_error("unknown measure kind: " + kind);
}

MeasureSpec load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open measure config: " + path);
    json j;
    in >> j;
    return measure_from_json(j);
}

void atomic_write(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot write: " + tmp);
        out << contents;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw validation_error("cannot rename into place: " + path);
}

Vec parse_vector(const std::string& csv) {
    std::vector<double> vals;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        vals.push_back(std::stod(item));
    }
    if (vals.size() < 2 || vals.size() > 3)
        throw validation_error("vector must have 2 or 3 components: " + csv);
    Vec v(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
    return v;
}

}  // namespace disclab
