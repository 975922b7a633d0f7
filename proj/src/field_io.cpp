#include "quadscat/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace quadscat {
namespace {

constexpr const char* kLayout = "row-major z-fastest";

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

std::filesystem::path with_ext(std::filesystem::path base, const char* ext) { return base.concat(ext); }

}  // namespace

std::filesystem::path field_basename(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".json" || ext == ".bin") return path.parent_path() / path.stem();
  return path;
}

void write_field(const ScalarField& field, const std::filesystem::path& path) {
  const auto base = field_basename(path);
  nlohmann::json header = {{"n", 3},
                           {"N", field.spec().points()},
                           {"L", field.spec().half_width()},
                           {"space", to_string(field.space())},
                           {"dtype", "c128"},
                           {"layout", kLayout}};
  std::ofstream hj(with_ext(base, ".json"));
  if (!hj) throw std::runtime_error("cannot write " + with_ext(base, ".json").string());
  hj << header.dump(2) << "\n";

  std::ofstream bin(with_ext(base, ".bin"), std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + with_ext(base, ".bin").string());
  std::vector<std::uint64_t> words(2 * field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    words[2 * i] = to_little(std::bit_cast<std::uint64_t>(field[i].real()));
    words[2 * i + 1] = to_little(std::bit_cast<std::uint64_t>(field[i].imag()));
  }
  bin.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 8));
}

ScalarField read_field(const std::filesystem::path& path) {
  const auto base = field_basename(path);
  std::ifstream hj(with_ext(base, ".json"));
  if (!hj) throw std::runtime_error("missing field header " + with_ext(base, ".json").string());
  nlohmann::json header;
  try {
    hj >> header;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed field header: " + std::string(e.what()));
  }
  if (header.value("n", 0) != 3) throw std::runtime_error("field header: only n = 3 is supported");
  if (header.value("dtype", "") != "c128") throw std::runtime_error("field header: dtype must be c128");
  if (header.value("layout", "") != kLayout) throw std::runtime_error("field header: unsupported layout");

  const GridSpec spec(header.at("N").get<std::size_t>(), header.at("L").get<double>());
  const Space space = space_from_string(header.at("space").get<std::string>());

  std::ifstream bin(with_ext(base, ".bin"), std::ios::binary);
  if (!bin) throw std::runtime_error("missing field data " + with_ext(base, ".bin").string());
  std::vector<std::uint64_t> words(2 * spec.size());
  bin.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(words.size() * 8));
  if (bin.gcount() != static_cast<std::streamsize>(words.size() * 8) || bin.peek() != EOF) {
    throw std::runtime_error("field data size does not match header N^3");
  }
  CVec values(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    values[i] = {std::bit_cast<double>(to_little(words[2 * i])), std::bit_cast<double>(to_little(words[2 * i + 1]))};
  }
  return ScalarField(spec, space, std::move(values));
}

}  // namespace quadscat
