#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "colcirc/circuit.hpp"
#include "colcirc/column.hpp"

namespace colcirc {

// An encoded form: scheme id, parameters and labeled constituent columns.
struct SchemeInstance {
  std::string scheme_id;
  json params = json::object();
  ColumnFamily columns;
};

struct VerifyResult {
  bool accepted = true;
  std::string reason;

  static VerifyResult accept() { return {}; }
  static VerifyResult reject(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return accepted; }
};

using TypeMap = std::map<std::string, ElementType>;
TypeMap types_of(const ColumnFamily& cols);

struct CodecEntry {
  std::string scheme_id;
  std::string summary;
  json param_schema = json::object();  // parameter name -> description
  // Decoder circuit over encoded columns of the given types.
  std::function<Circuit(const json& params, const TypeMap& encoded)> build_decoder;
  // Host encoder; throws Errc::not_encodable when the input is outside I.
  std::function<SchemeInstance(const json& params, const ColumnFamily& input)> encode;
  // Host decision procedure; must not throw on well-typed columns.
  std::function<VerifyResult(const json& params, const ColumnFamily& encoded)> verify;
  // Canonical representative under the scheme's equivalence; identity if unset.
  std::function<ColumnFamily(const ColumnFamily& decoded)> canonicalize;
  // Optional: an encoded form of something close to `input` with the same
  // length and type; used by the patch and elementwise-add recipes.
  std::function<SchemeInstance(const json& params, const Column& input)> approximate;
};

// Registry of codecs. The builtin instance is populated on first use and is
// read-only afterwards except for explicit registrations.
class CodecRegistry {
 public:
  static CodecRegistry& builtin();

  void register_codec(CodecEntry entry);
  bool contains(const std::string& id) const;
  const CodecEntry& find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const CodecEntry>> entries_;
};

inline const char* kColumnLabel = "column";

SchemeInstance encode(const std::string& scheme_id, const json& params, const ColumnFamily& input,
                      const CodecRegistry& registry = CodecRegistry::builtin());
SchemeInstance encode(const std::string& scheme_id, const json& params, const Column& column,
                      const CodecRegistry& registry = CodecRegistry::builtin());
VerifyResult verify(const SchemeInstance& inst,
                    const CodecRegistry& registry = CodecRegistry::builtin());
ColumnFamily decode(const SchemeInstance& inst,
                    const CodecRegistry& registry = CodecRegistry::builtin(),
                    const EvalOptions& options = {});
// Decode for schemes with a single "column" output.
Column decode_column(const SchemeInstance& inst,
                     const CodecRegistry& registry = CodecRegistry::builtin());

Circuit decoder_circuit(const SchemeInstance& inst,
                        const CodecRegistry& registry = CodecRegistry::builtin());
// One-vertex decision circuit lifting the scheme's verifier.
Circuit verifier_circuit(const SchemeInstance& inst);
ColumnFamily canonical_form(const std::string& scheme_id, const ColumnFamily& decoded,
                            const CodecRegistry& registry = CodecRegistry::builtin());
// decoded ~ original under the scheme's equivalence.
bool equivalent(const std::string& scheme_id, const ColumnFamily& a, const ColumnFamily& b,
                const CodecRegistry& registry = CodecRegistry::builtin());

struct Ratio {
  std::uint64_t decoded_bytes = 0;
  std::uint64_t encoded_bytes = 0;
  double value() const {
    return encoded_bytes == 0 ? 0.0
                              : static_cast<double>(decoded_bytes) / static_cast<double>(encoded_bytes);
  }
};
Ratio compression_ratio(const SchemeInstance& inst,
                        const CodecRegistry& registry = CodecRegistry::builtin());

OperatorPtr make_verify_operator(const json& params);

// Helpers for circuits assembled from decoders.
Circuit prefix_labels(const Circuit& c, const std::string& prefix);
// Union of `outer` and `inner`, feeding each outer input named in `links`
// from the inner output it maps to. Consumed inner outputs are dropped.
Circuit chain_circuits(const Circuit& outer, const Circuit& inner,
                       const std::map<std::string, std::string>& links);

enum class RecipeKind {
  segmentize_uniform,
  segmentize_variable,
  patch,
  alternate,
  elementwise_add,
  differentiate,
  small_dict_fit,
};

struct InnerScheme {
  std::string scheme_id;
  json params = json::object();
};

struct CompositionRecipe {
  RecipeKind kind;
  std::string scheme_id;           // id of the composed codec
  std::vector<InnerScheme> inner;  // one, or two for alternate / elementwise-add
  json params = json::object();    // recipe defaults, e.g. segment_length
};

CodecEntry compose(const CompositionRecipe& recipe,
                   const CodecRegistry& registry = CodecRegistry::builtin());

void register_builtin_schemes(CodecRegistry& registry);

}  // namespace colcirc
