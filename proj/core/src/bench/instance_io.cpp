#include "gipsa/bench/instance_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gipsa/errors.hpp"

namespace gipsa::bench {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

void append_le(std::vector<std::uint8_t>& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits & 0xFFu));
    bits >>= 8;
  }
}

double read_le(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) {
    bits = (bits << 8) | p[i];
  }
  return std::bit_cast<double>(bits);
}

std::uint64_t fnv1a(std::uint64_t h, const std::uint8_t* data, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t v) {
  std::array<std::uint8_t, 8> bytes{};
  for (auto& b : bytes) {
    b = static_cast<std::uint8_t>(v & 0xFFu);
    v >>= 8;
  }
  return fnv1a(h, bytes.data(), bytes.size());
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8) |
                            bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    if (rest == 2) v |= std::uint32_t{bytes[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::array<int, 256> lookup{};
  lookup.fill(-1);
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
    lookup[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
  }
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.size() % 4 != 0) {
    throw InvalidInput("base64: length is not a multiple of 4");
  }
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::uint32_t v = 0;
    int pad = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw InvalidInput("base64: misplaced padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw InvalidInput("base64: data after padding");
      const int d = lookup[static_cast<unsigned char>(c)];
      if (d < 0) throw InvalidInput("base64: invalid character");
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFFu));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xFFu));
  }
  return out;
}

std::vector<std::uint8_t> instance_payload(const LassoInstance& inst) {
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>((inst.rows() * inst.cols() + inst.rows()) * 8));
  for (Index i = 0; i < inst.rows(); ++i) {
    for (Index j = 0; j < inst.cols(); ++j) append_le(out, inst.A()(i, j));
  }
  for (Index i = 0; i < inst.rows(); ++i) append_le(out, inst.b()[i]);
  return out;
}

std::string content_hash(const LassoInstance& inst) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  h = fnv1a_u64(h, static_cast<std::uint64_t>(inst.rows()));
  h = fnv1a_u64(h, static_cast<std::uint64_t>(inst.cols()));
  h = fnv1a_u64(h, std::bit_cast<std::uint64_t>(inst.rho()));
  const auto payload = instance_payload(inst);
  h = fnv1a(h, payload.data(), payload.size());
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

void write_instance(const std::filesystem::path& path, const LassoInstance& inst,
                    const std::optional<GenSpec>& generated) {
  json meta;
  meta["n"] = inst.cols();
  meta["m"] = inst.rows();
  meta["rho"] = inst.rho();
  if (generated) {
    meta["seed"] = generated->seed;
    meta["generator"] = kGeneratorName;
    meta["nnz"] = generated->nnz;
    meta["sigma2"] = generated->sigma2;
  } else {
    meta["seed"] = nullptr;
    meta["generator"] = nullptr;
  }
  meta["encoding"] = "base64";
  meta["payload_doubles"] = inst.rows() * inst.cols() + inst.rows();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << kInstanceHeader << '\n' << meta.dump() << '\n';
  out << base64_encode(instance_payload(inst)) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

LoadedInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open instance file " + path.string());
  std::string header, meta_line, payload_line;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != kInstanceHeader) {
    throw InvalidInput("instance file: bad header line in " + path.string());
  }
  if (!std::getline(in, meta_line) || !std::getline(in, payload_line)) {
    throw InvalidInput("instance file: truncated " + path.string());
  }
  json meta;
  try {
    meta = json::parse(meta_line);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance file: metadata is not JSON: ") + e.what());
  }
  InstanceMetadata md;
  try {
    md.n = meta.at("n").get<Index>();
    md.m = meta.at("m").get<Index>();
    md.rho = meta.at("rho").get<double>();
    if (meta.at("encoding").get<std::string>() != "base64") {
      throw InvalidInput("instance file: unsupported encoding");
    }
    if (meta.contains("generator") && !meta["generator"].is_null()) {
      GenSpec g;
      g.n = md.n;
      g.m = md.m;
      g.rho = md.rho;
      g.seed = meta.at("seed").get<std::uint64_t>();
      g.nnz = meta.at("nnz").get<Index>();
      g.sigma2 = meta.at("sigma2").get<double>();
      md.generated = g;
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance file: bad metadata: ") + e.what());
  }
  if (md.n < 1 || md.m < 1) throw InvalidInput("instance file: n and m must be positive");

  const auto bytes = base64_decode(payload_line);
  const auto expected = static_cast<std::size_t>((md.m * md.n + md.m) * 8);
  if (bytes.size() != expected) {
    throw InvalidInput("instance file: payload size does not match m and n");
  }
  DenseMatrix A(md.m, md.n);
  Vector b(md.m);
  const std::uint8_t* p = bytes.data();
  for (Index i = 0; i < md.m; ++i) {
    for (Index j = 0; j < md.n; ++j, p += 8) A(i, j) = read_le(p);
  }
  for (Index i = 0; i < md.m; ++i, p += 8) b[i] = read_le(p);
  return LoadedInstance{LassoInstance(std::move(A), std::move(b), md.rho), md};
}

void write_reference(const std::filesystem::path& path, const LassoInstance& inst,
                     const ReferenceSolution& ref) {
  json j;
  j["content_hash"] = content_hash(inst);
  j["F_star"] = ref.F_star;
  j["residual"] = ref.residual;
  j["method"] = ref.method;
  j["support_refined"] = ref.support_refined;
  j["converged"] = ref.converged;
  j["phase1_iterations"] = ref.phase1_iterations;
  std::vector<std::uint8_t> bytes;
  for (Index i = 0; i < ref.x_star.size(); ++i) append_le(bytes, ref.x_star[i]);
  j["x_star_base64"] = base64_encode(bytes);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

std::optional<ReferenceSolution> read_reference(const std::filesystem::path& path,
                                                const LassoInstance& inst) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("content_hash").get<std::string>() != content_hash(inst)) return std::nullopt;
    const auto bytes = base64_decode(j.at("x_star_base64").get<std::string>());
    if (bytes.size() != static_cast<std::size_t>(inst.cols() * 8)) return std::nullopt;
    ReferenceSolution ref;
    ref.x_star.resize(inst.cols());
    for (Index i = 0; i < inst.cols(); ++i) ref.x_star[i] = read_le(bytes.data() + 8 * i);
    ref.F_star = j.at("F_star").get<double>();
    ref.residual = j.at("residual").get<double>();
    ref.method = j.at("method").get<std::string>();
    ref.support_refined = j.at("support_refined").get<bool>();
    ref.converged = j.at("converged").get<bool>();
    ref.phase1_iterations = j.at("phase1_iterations").get<std::int64_t>();
    return ref;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace gipsa::bench
