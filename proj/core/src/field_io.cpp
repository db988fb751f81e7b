#include "fracfront/field_io.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fracfront {

static_assert(std::endian::native == std::endian::little,
              "raw field dumps assume a little-endian host");

void write_field(const std::string& path, const RealField& field,
                 const std::string& kind) {
    nlohmann::json header = {
        {"dim", field.grid.dim()},
        {"extent", field.grid.extent()},
        {"points", field.grid.points()},
        {"kind", kind},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

void write_field(const std::string& path, const SignField& field) {
    RealField f;
    f.grid = field.grid;
    f.values = field.values;
    write_field(path, f, "sign");
}

LoadedField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_field: missing header");
    const auto header = nlohmann::json::parse(line);
    LoadedField out;
    out.kind = header.at("kind").get<std::string>();
    out.field.grid = make_grid(header.at("dim").get<int>(),
                               header.at("extent").get<double>(),
                               header.at("points").get<std::int64_t>());
    out.field.values.resize(out.field.grid.node_count());
    in.read(reinterpret_cast<char*>(out.field.values.data()),
            static_cast<std::streamsize>(out.field.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_field: truncated payload in " + path);
    return out;
}

}  // namespace fracfront
