#include "jumpset/gf1.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace jumpset {
namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint64_t to_little_endian(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t out = 0;
        for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return out;
    }
    return bits;
}

std::string default_payload_name(const std::filesystem::path& header) {
    std::string name = header.filename().string();
    for (const std::string suffix : {".gf1.json", ".json"}) {
        if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            return name.substr(0, name.size() - suffix.size()) + ".bin";
        }
    }
    return name + ".bin";
}

}  // namespace

GridFunction read_grid(const std::filesystem::path& header_path) {
    const std::string text = slurp(header_path);
    json header;
    try {
        header = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(e.byte, std::string("header is not valid JSON: ") + e.what());
    }
    const auto field = [&](const char* key) -> const json& {
        if (!header.is_object() || !header.contains(key)) {
            throw FormatError(0, std::string("header missing field '") + key + "'");
        }
        return header.at(key);
    };
    if (field("gf1") != 1) throw FormatError(0, "unsupported gf1 version");

    const json& jdim = field("dim");
    if (!jdim.is_number_integer()) throw FormatError(0, "dim must be an integer");
    const long long dim = jdim.get<long long>();
    if (dim > kMaxDim) throw Error(Errc::DimensionUnsupported, "dim " + std::to_string(dim) + " > 3");
    if (dim < 1) throw FormatError(0, "dim must be >= 1");

    const json& jshape = field("shape");
    const json& jorigin = field("origin");
    if (!jshape.is_array() || jshape.size() != static_cast<std::size_t>(dim)) {
        throw FormatError(0, "shape must list dim extents");
    }
    if (!jorigin.is_array() || jorigin.size() != static_cast<std::size_t>(dim)) {
        throw FormatError(0, "origin must list dim coordinates");
    }
    std::vector<std::size_t> shape;
    std::size_t count = 1;
    for (const json& e : jshape) {
        if (!e.is_number_integer() || e.get<long long>() < 2) throw FormatError(0, "extents must be integers >= 2");
        shape.push_back(e.get<std::size_t>());
        count *= shape.back();
    }
    Vec origin{};
    for (std::size_t k = 0; k < jorigin.size(); ++k) {
        if (!jorigin[k].is_number()) throw FormatError(0, "origin entries must be numbers");
        origin[k] = jorigin[k].get<double>();
    }
    const json& jspacing = field("spacing");
    if (!jspacing.is_number() || !(jspacing.get<double>() > 0.0)) throw FormatError(0, "spacing must be positive");
    const json& jpayload = field("payload");
    if (!jpayload.is_string()) throw FormatError(0, "payload must be a path string");

    const std::filesystem::path payload_path = header_path.parent_path() / jpayload.get<std::string>();
    const std::string bytes = slurp(payload_path);
    if (bytes.size() != count * sizeof(double)) {
        throw FormatError(bytes.size(), "payload holds " + std::to_string(bytes.size()) + " bytes, header expects " +
                                            std::to_string(count * sizeof(double)));
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, bytes.data() + i * sizeof(double), sizeof bits);
        values[i] = std::bit_cast<double>(to_little_endian(bits));
    }
    return GridFunction(std::move(shape), jspacing.get<double>(), origin, std::move(values));
}

void write_grid(const GridFunction& u, const std::filesystem::path& header_path, const std::string& payload_name) {
    const std::string payload = payload_name.empty() ? default_payload_name(header_path) : payload_name;
    json header;
    header["gf1"] = 1;
    header["dim"] = u.dim();
    header["shape"] = u.shape();
    header["spacing"] = u.spacing();
    header["origin"] = std::vector<double>(u.origin().begin(), u.origin().begin() + u.dim());
    header["payload"] = payload;

    std::ofstream hout(header_path);
    if (!hout) throw Error(Errc::InvalidArgument, "cannot write " + header_path.string());
    hout << header.dump(2) << '\n';

    std::ofstream pout(header_path.parent_path() / payload, std::ios::binary);
    if (!pout) throw Error(Errc::InvalidArgument, "cannot write payload " + payload);
    for (double v : u.values()) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
        pout.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
}

}  // namespace jumpset
