#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "toscadata/model.hpp"
#include "toscadata/type_system.hpp"

namespace toscadata {

namespace rules {
inline constexpr const char* kReqMatch = "R1-REQ-MATCH";
inline constexpr const char* kLocality = "R2-LOCALITY";
inline constexpr const char* kDuplicateConn = "R3-DUPLICATE-CONN";
inline constexpr const char* kEncryption = "R4-ENCRYPTION";
inline constexpr const char* kHosting = "R5-HOSTING";
inline constexpr const char* kScheduling = "R6-SCHEDULING";
}  // namespace rules

enum class Severity { error, fixable, warning };
std::string_view to_string(Severity s);

struct Diagnostic {
  std::string rule;
  Severity severity = Severity::error;
  std::vector<std::string> nodes;
  std::string message;
  std::optional<std::string> fix;

  bool operator==(const Diagnostic&) const = default;
};

enum class Locality { local, remote };
std::string_view to_string(Locality l);

/// The node itself first, then each `host` target in turn.
std::vector<std::string> host_chain(const std::string& node, const ServiceTemplate& t,
                                    const TypeSystem& types);
std::vector<std::string> host_chain(const std::string& node, const ServiceTemplate& t);

/// Nearest Nifi in the host chain of `node`.
std::string nifi_host(const std::string& node, const ServiceTemplate& t,
                      const TypeSystem& types);

Locality colocated(const std::string& a, const std::string& b, const ServiceTemplate& t,
                   const TypeSystem& types);
Locality colocated(const std::string& a, const std::string& b, const ServiceTemplate& t);

/// A requirement assignment whose requirement targets ConnectToPipeline.
struct Connection {
  std::string source;
  std::string target;
  std::size_t index = 0;  // position in source's requirement list
  std::string relationship;
  std::optional<Locality> kind;  // nullopt: neither local nor remote
};

std::vector<Connection> connections(const ServiceTemplate& t, const TypeSystem& types);

/// Fresh 32-character lowercase hex passphrase.
std::string generate_passphrase(std::mt19937_64& rng);

std::vector<Diagnostic> check_requirements(const ServiceTemplate& t, const TypeSystem& types);
std::vector<Diagnostic> check_locality(const ServiceTemplate& t, const TypeSystem& types);
std::vector<Diagnostic> check_encryption(const ServiceTemplate& t, const TypeSystem& types);
std::vector<Diagnostic> check_scheduling(const ServiceTemplate& t, const TypeSystem& types);

struct VerifyOptions {
  bool fix = false;
  std::optional<std::uint64_t> seed;  // nullopt: nondeterministic passphrases
};

struct VerifyResult {
  ServiceTemplate verified;
  std::vector<Diagnostic> diagnostics;
  bool fixed = false;  // at least one repair applied

  bool has_errors() const;
  /// Errors, plus fixable findings left unrepaired.
  bool has_problems() const;
};

inline constexpr int kMaxVerifyPasses = 3;

VerifyResult verify(const ServiceTemplate& t, const VerifyOptions& options = {});

std::string report_json(const VerifyResult& result);
/// One `RULE\tSEVERITY\tNODES\tMESSAGE` line per diagnostic.
std::string report_text(const VerifyResult& result);

}  // namespace toscadata
