#include "sproc/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "sproc/error.hpp"

namespace sproc {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::optional<double> to_double(const std::string& tok) {
    if (tok.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round_sig12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot write '" + tmp.string() + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw InputError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot move output into place at '" + path.string() + "'");
    }
}

// ---------------------------------------------------------------- ESRI grid

Raster parse_esri_ascii(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::map<std::string, double> hdr;
    bool center = false;
    std::string tok;
    std::optional<double> first_value;
    while (in >> tok) {
        if (to_double(tok)) {
            first_value = to_double(tok);
            break;
        }
        const std::string key = lower(tok);
        std::string val;
        if (!(in >> val) || !to_double(val)) {
            throw InputError("malformed ESRI header entry '" + tok + "'");
        }
        if (key == "xllcenter" || key == "yllcenter") center = true;
        hdr[key] = *to_double(val);
    }
    auto need = [&](const char* k) {
        auto it = hdr.find(k);
        if (it == hdr.end()) throw InputError(std::string("ESRI header is missing ") + k);
        return it->second;
    };
    const int ncol = static_cast<int>(need("ncols"));
    const int nrow = static_cast<int>(need("nrows"));
    double dx = 0.0;
    double dy = 0.0;
    if (hdr.count("cellsize")) {
        dx = dy = hdr["cellsize"];
    } else {
        dx = need("dx");
        dy = need("dy");
    }
    double x0 = center ? need("xllcenter") - 0.5 * dx : need("xllcorner");
    double y0 = center ? need("yllcenter") - 0.5 * dy : need("yllcorner");
    const bool has_nodata = hdr.count("nodata_value") > 0;
    const double nodata = has_nodata ? hdr["nodata_value"] : 0.0;
    if (ncol <= 0 || nrow <= 0 || !(dx > 0) || !(dy > 0)) {
        throw InputError("ESRI header has nonpositive dimensions or cell size");
    }

    const GridSpec g{x0, y0, dx, dy, ncol, nrow};
    std::vector<double> v(g.size());
    std::size_t k = 0;
    auto store = [&](double value) {
        if (k >= v.size()) throw InputError("ESRI grid has more values than ncols*nrows");
        // file row 0 is the top row
        const std::size_t file_row = k / static_cast<std::size_t>(ncol);
        const std::size_t col = k % static_cast<std::size_t>(ncol);
        const std::size_t row = static_cast<std::size_t>(nrow) - 1 - file_row;
        const bool missing = (has_nodata && value == nodata) || !std::isfinite(value);
        v[row * static_cast<std::size_t>(ncol) + col] = missing ? std::nan("") : value;
        ++k;
    };
    if (first_value) store(*first_value);
    while (in >> tok) {
        const auto d = to_double(tok);
        if (!d) {
            const std::string l = lower(tok);
            if (l == "nan" || l == "-nan") {
                store(std::nan(""));
                continue;
            }
            throw InputError("non-numeric value '" + tok + "' in ESRI grid");
        }
        store(*d);
    }
    if (k != v.size()) {
        throw InputError("ESRI grid has " + std::to_string(k) + " values, expected " + std::to_string(v.size()));
    }
    return Raster(g, std::move(v));
}

Raster read_esri_ascii(const std::filesystem::path& path) {
    try {
        return parse_esri_ascii(read_text(path));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string format_esri_ascii(const Raster& r) {
    const GridSpec& g = r.grid();
    constexpr double nodata = -9999.0;
    std::string out;
    out += "ncols " + std::to_string(g.ncol) + "\n";
    out += "nrows " + std::to_string(g.nrow) + "\n";
    out += "xllcorner " + format_number(g.x0) + "\n";
    out += "yllcorner " + format_number(g.y0) + "\n";
    if (g.dx == g.dy) {
        out += "cellsize " + format_number(g.dx) + "\n";
    } else {
        out += "dx " + format_number(g.dx) + "\n";
        out += "dy " + format_number(g.dy) + "\n";
    }
    out += "NODATA_value " + format_number(nodata) + "\n";
    for (int row = g.nrow - 1; row >= 0; --row) {
        for (int col = 0; col < g.ncol; ++col) {
            const double v = r[static_cast<std::size_t>(row) * static_cast<std::size_t>(g.ncol) + static_cast<std::size_t>(col)];
            if (col > 0) out += ' ';
            out += std::isfinite(v) ? format_number(v) : format_number(nodata);
        }
        out += '\n';
    }
    return out;
}

void write_esri_ascii(const std::filesystem::path& path, const Raster& r) {
    write_text_atomic(path, format_esri_ascii(r));
}

// ---------------------------------------------------------------- points

PointPattern parse_points_csv(std::string_view text, const Window& window, const std::string& weight_column) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header = split_csv_line(line);
            break;
        }
    }
    if (header.empty()) {
        throw InputError("points CSV has no header");
    }
    const std::string wname = weight_column.empty() ? "weight" : weight_column;
    int ix = -1, iy = -1, im = -1, iw = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string h = lower(header[c]);
        if (h == "x") ix = static_cast<int>(c);
        if (h == "y") iy = static_cast<int>(c);
        if (h == "mark") im = static_cast<int>(c);
        if (h == lower(wname)) iw = static_cast<int>(c);
    }
    if (ix < 0 || iy < 0) {
        throw InputError("points CSV header must contain x and y columns");
    }
    if (!weight_column.empty() && iw < 0) {
        throw InputError("points CSV has no weight column '" + weight_column + "'");
    }
    std::vector<Point> pts;
    std::vector<int> marks;
    std::vector<double> weights;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        auto field = [&](int c) -> double {
            if (c >= static_cast<int>(f.size())) {
                throw InputError("points CSV line " + std::to_string(lineno) + " has too few fields");
            }
            const auto d = to_double(f[static_cast<std::size_t>(c)]);
            if (!d) {
                throw InputError("points CSV line " + std::to_string(lineno) + ": bad number '" +
                                 f[static_cast<std::size_t>(c)] + "'");
            }
            return *d;
        };
        pts.push_back({field(ix), field(iy)});
        if (im >= 0) {
            const double m = field(im);
            if (m != 0.0 && m != 1.0) {
                throw InputError("points CSV line " + std::to_string(lineno) + ": mark must be 0 or 1");
            }
            marks.push_back(static_cast<int>(m));
        }
        if (iw >= 0) weights.push_back(field(iw));
    }
    std::optional<std::vector<int>> om;
    std::optional<std::vector<double>> ow;
    if (im >= 0) om = std::move(marks);
    if (iw >= 0) ow = std::move(weights);
    return PointPattern(std::move(pts), window, std::move(om), std::move(ow));
}

PointPattern read_points_csv(const std::filesystem::path& path, const Window& window,
                             const std::string& weight_column) {
    try {
        return parse_points_csv(read_text(path), window, weight_column);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string format_points_csv(const PointPattern& pp) {
    std::string out = "x,y";
    if (pp.marks()) out += ",mark";
    if (pp.weights()) out += ",weight";
    out += '\n';
    for (std::size_t i = 0; i < pp.size(); ++i) {
        out += format_number(pp.points()[i].x) + "," + format_number(pp.points()[i].y);
        if (pp.marks()) out += "," + std::to_string((*pp.marks())[i]);
        if (pp.weights()) out += "," + format_number((*pp.weights())[i]);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------- window

Window read_window_json(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
        const double xmin = j.at("xmin").get<double>();
        const double xmax = j.at("xmax").get<double>();
        const double ymin = j.at("ymin").get<double>();
        const double ymax = j.at("ymax").get<double>();
        if (j.contains("mask_path") && !j["mask_path"].is_null()) {
            std::filesystem::path mp = j["mask_path"].get<std::string>();
            if (mp.is_relative()) mp = path.parent_path() / mp;
            const Raster m = read_esri_ascii(mp);
            Mask mask{m.grid(), std::vector<std::uint8_t>(m.size())};
            for (std::size_t i = 0; i < m.size(); ++i) {
                mask.inside[i] = std::isfinite(m[i]) && m[i] != 0.0 ? 1 : 0;
            }
            return Window(xmin, xmax, ymin, ymax, std::move(mask));
        }
        return Window(xmin, xmax, ymin, ymax);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

Window window_of(const GridSpec& g) { return Window(g.x0, g.xmax(), g.y0, g.ymax()); }

}  // namespace sproc
