#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gipsa/bench/generator.hpp"
#include "gipsa/oracle.hpp"
#include "gipsa/problem.hpp"

namespace gipsa::bench {

inline constexpr std::string_view kInstanceHeader = "GIPSA-LASSO v1";

/// Generation parameters carried in the metadata line. Absent for instances
/// that did not come from generate_instance.
struct InstanceMetadata {
  Index n = 0;
  Index m = 0;
  double rho = 0.0;
  std::optional<GenSpec> generated;
};

struct LoadedInstance {
  LassoInstance instance;
  InstanceMetadata metadata;
};

/// Three lines: the header, a one-line JSON object (n, m, rho, seed,
/// generator, nnz, sigma2, encoding, payload_doubles), and the base64 of the
/// little-endian float64 payload: A row-major, then b.
void write_instance(const std::filesystem::path& path, const LassoInstance& inst,
                    const std::optional<GenSpec>& generated = std::nullopt);
LoadedInstance read_instance(const std::filesystem::path& path);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Little-endian float64 bytes of A (row-major) followed by b.
std::vector<std::uint8_t> instance_payload(const LassoInstance& inst);

/// FNV-1a over m, n, the bits of rho and the payload; hex-encoded.
std::string content_hash(const LassoInstance& inst);

/// Reference-solution cache stored as JSON next to the instance.
void write_reference(const std::filesystem::path& path, const LassoInstance& inst,
                     const ReferenceSolution& ref);
/// nullopt when the file is missing or was written for different content.
std::optional<ReferenceSolution> read_reference(const std::filesystem::path& path,
                                                const LassoInstance& inst);

}  // namespace gipsa::bench
