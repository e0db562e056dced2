#include "colcirc/catalog.hpp"
#include "colcirc/circuit.hpp"
#include "colcirc/codec.hpp"
#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"
#include "colcirc/transform.hpp"

namespace colcirc {

namespace {

const ElementType kU64 = ElementType::u(64);
const ElementType kBit = ElementType::bit();

Signature sig(std::vector<Port> in, std::vector<Port> out) {
  return Signature{std::move(in), std::move(out)};
}

std::vector<ElementType> param_types(const json& params) {
  require(params.contains("types") && params["types"].is_array() && !params["types"].empty(),
          Errc::invalid_argument, "missing 'types' list");
  std::vector<ElementType> out;
  for (const auto& t : params["types"]) out.push_back(ElementType::parse(t.get<std::string>()));
  return out;
}

std::vector<Port> numbered(const std::vector<ElementType>& types) {
  std::vector<Port> ports;
  for (std::size_t k = 0; k < types.size(); ++k) ports.push_back({"c" + std::to_string(k), types[k]});
  return ports;
}

// Runs an inner circuit once per segment of variable-length segmented inputs.
class SegmentizeOperator : public Operator {
 public:
  SegmentizeOperator(json params, Circuit inner, Signature signature)
      : Operator("Segmentize", std::move(params), std::move(signature)), inner_(std::move(inner)) {}

  static OperatorPtr create(const json& params) {
    require(params.contains("inner"), Errc::invalid_argument, "Segmentize needs 'inner'");
    const json& inner_spec = params["inner"];
    Circuit inner = inner_spec.contains("op")
                        ? lift_operator(make_op(inner_spec["op"].get<std::string>(),
                                                inner_spec.value("params", json::object())))
                        : circuit_from_json(inner_spec);
    require_valid(inner);
    ElementType len_t = param_type_or(params, "length_type", kU64);
    Signature s;
    for (const auto& p : inner.signature().inputs) {
      s.inputs.push_back(p);
      s.inputs.push_back({p.label + "_seglen", len_t});
    }
    for (const auto& p : inner.signature().outputs) {
      s.outputs.push_back(p);
      s.outputs.push_back({p.label + "_seglen", len_t});
    }
    json stored = params;
    stored["inner"] = inner_spec.contains("op") ? inner_spec : circuit_to_json(inner);
    return std::make_shared<SegmentizeOperator>(std::move(stored), std::move(inner), std::move(s));
  }

 protected:
  std::vector<Column> apply(const std::vector<Column>& inputs) const override {
    const auto& in_ports = inner_.signature().inputs;
    const auto& out_ports = inner_.signature().outputs;
    std::size_t segments = 0;
    std::vector<std::vector<std::size_t>> offsets(in_ports.size());
    for (std::size_t k = 0; k < in_ports.size(); ++k) {
      const Column& data = inputs[2 * k];
      const Column& lens = inputs[2 * k + 1];
      if (k == 0) segments = lens.size();
      require(lens.size() == segments, Errc::length_mismatch,
              "Segmentize: inputs disagree on segment count");
      auto& off = offsets[k];
      off.push_back(0);
      for (std::size_t j = 0; j < lens.size(); ++j) off.push_back(off.back() + lens.u64(j));
      require(off.back() == data.size(), Errc::length_mismatch,
              "Segmentize: segment lengths of '" + in_ports[k].label + "' sum to " +
                  std::to_string(off.back()) + ", data has " + std::to_string(data.size()));
    }
    std::vector<std::vector<Column>> pieces(out_ports.size());
    std::vector<ColumnBuilder> lengths;
    ElementType len_t = signature().outputs.size() > 1 ? signature().outputs[1].type : kU64;
    for (std::size_t k = 0; k < out_ports.size(); ++k) lengths.emplace_back(len_t, segments);
    EvalOptions opts;
    opts.skip_validation = true;
    for (std::size_t j = 0; j < segments; ++j) {
      ColumnFamily args;
      for (std::size_t k = 0; k < in_ports.size(); ++k) {
        args.emplace(in_ports[k].label, slice(inputs[2 * k], offsets[k][j], offsets[k][j + 1]));
      }
      ColumnFamily out;
      try {
        out = evaluate_circuit(inner_, args, opts);
      } catch (const Error& e) {
        throw Error(e.code(), "segment " + std::to_string(j) + ": " + e.what());
      }
      for (std::size_t k = 0; k < out_ports.size(); ++k) {
        const Column& piece = out.at(out_ports[k].label);
        lengths[k].push_int(static_cast<i128>(piece.size()));
        pieces[k].push_back(piece);
      }
    }
    std::vector<Column> result;
    for (std::size_t k = 0; k < out_ports.size(); ++k) {
      result.push_back(pieces[k].empty() ? empty_column(out_ports[k].type) : concat(pieces[k]));
      result.push_back(lengths[k].finish());
    }
    return result;
  }

 private:
  Circuit inner_;
};

void register_all(OperatorCatalog& cat) {
  cat.register_op("NoOp", [](const json& p) {
    auto t = param_type(p, "type");
    return make_lambda_op("NoOp", p, sig({{"col", t}}, {{"res", t}}),
                          [](const std::vector<Column>& a) { return std::vector<Column>{a[0]}; });
  });

  cat.register_op("Scalar", [](const json& p) {
    auto t = param_type(p, "type");
    require(p.contains("value"), Errc::invalid_argument, "Scalar needs 'value'");
    Column value = ops::scalar(t, p["value"]);
    return make_lambda_op("Scalar", p, sig({}, {{"val", t}}),
                          [value](const std::vector<Column>&) { return std::vector<Column>{value}; });
  });

  cat.register_op("Elementwise", [](const json& p) {
    ops::ElementwiseSpec spec;
    spec.fn = param_string(p, "fn");
    spec.type = spec.fn == "tuple_make" ? ElementType::unit() : param_type(p, "type");
    if (p.contains("out_type")) spec.out_type = param_type(p, "out_type");
    spec.constants = p;
    std::vector<Port> in;
    auto labels = ops::elementwise_input_labels(spec);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      ElementType t = spec.type;
      if (spec.fn == "tuple_make") t = ElementType::parse(p["types"][k].get<std::string>());
      if (spec.fn == "if_else" && k == 0) t = kBit;
      in.push_back({labels[k], t});
    }
    return make_lambda_op("Elementwise", p, sig(in, ops::elementwise_outputs(spec)),
                          [spec](const std::vector<Column>& a) { return ops::elementwise(spec, a); });
  });

  cat.register_op("Replicate", [](const json& p) {
    auto t = param_type(p, "type");
    auto lt = param_type_or(p, "length_type", kU64);
    return make_lambda_op("Replicate", p, sig({{"val", t}, {"length", lt}}, {{"res", t}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{
                                ops::replicate(a[0], scalar_index(a[1], "replicate factor"))};
                          });
  });

  for (const char* name : {"ReplicateSegments", "ReplicateWithinSegments"}) {
    std::string op_name = name;
    cat.register_op(op_name, [op_name](const json& p) {
      auto t = param_type(p, "type");
      auto it = param_type_or(p, "int_type", kU64);
      bool within = op_name == "ReplicateWithinSegments";
      return make_lambda_op(
          op_name, p,
          sig({{"col", t}, {"segment_length", it}, {"factor", it}},
              {{"res", t}, {"new_segment_length", it}}),
          [within, it](const std::vector<Column>& a) {
            auto l = scalar_index(a[1], "segment length");
            auto f = scalar_index(a[2], "factor");
            auto [col, nl] = within ? ops::replicate_within_segments(a[0], l, f)
                                    : ops::replicate_segments(a[0], l, f);
            return std::vector<Column>{col, Column::from_ints(it, {static_cast<i128>(nl)})};
          });
    });
  }

  cat.register_op("Select", [](const json& p) {
    auto t = param_type(p, "type");
    bool ordered = p.value("ordered", true);
    return make_lambda_op("Select", p, sig({{"data", t}, {"selection", kBit}}, {{"res", t}}),
                          [ordered](const std::vector<Column>& a) {
                            Column out = ops::select(a[0], a[1]);
                            if (!ordered) {
                              // Relaxed variant: any order is allowed; emit reversed.
                              std::vector<std::size_t> idx(out.size());
                              for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = idx.size() - 1 - i;
                              out = take(out, idx);
                            }
                            return std::vector<Column>{out};
                          });
  });

  cat.register_op("Iota", [](const json& p) {
    auto t = param_type_or(p, "type", kU64);
    auto lt = param_type_or(p, "length_type", kU64);
    return make_lambda_op("Iota", p, sig({{"length", lt}}, {{"res", t}}),
                          [t](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::iota(scalar_index(a[0], "iota length"), t)};
                          });
  });

  cat.register_op("Permute", [](const json& p) {
    auto t = param_type(p, "type");
    auto pt = param_type_or(p, "pos_type", kU64);
    return make_lambda_op("Permute", p, sig({{"pos", pt}, {"data", t}}, {{"res", t}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::permute(a[0], a[1])};
                          });
  });

  cat.register_op("Length", [](const json& p) {
    auto t = param_type(p, "type");
    auto ot = param_type_or(p, "out_type", kU64);
    return make_lambda_op("Length", p, sig({{"column", t}}, {{"length", ot}}),
                          [ot](const std::vector<Column>& a) {
                            return std::vector<Column>{
                                Column::from_ints(ot, {static_cast<i128>(a[0].size())})};
                          });
  });

  cat.register_op("Concatenate", [](const json& p) {
    auto t = param_type(p, "type");
    auto k = param_int_or(p, "k", 2);
    require(k >= 1, Errc::invalid_argument, "Concatenate needs k >= 1");
    std::vector<Port> in;
    for (std::int64_t j = 0; j < k; ++j) in.push_back({"c" + std::to_string(j), t});
    return make_lambda_op("Concatenate", p, sig(in, {{"res", t}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::concatenate(a)};
                          });
  });

  cat.register_op("Scatter", [](const json& p) {
    auto t = param_type(p, "type");
    auto pt = param_type_or(p, "pos_type", kU64);
    return make_lambda_op("Scatter", p, sig({{"col", t}, {"pos", pt}, {"data", t}}, {{"res", t}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::scatter(a[0], a[1], a[2])};
                          });
  });

  cat.register_op("Gather", [](const json& p) {
    auto t = param_type(p, "type");
    auto pt = param_type_or(p, "pos_type", kU64);
    return make_lambda_op("Gather", p, sig({{"pos", pt}, {"data", t}}, {{"res", t}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::gather(a[0], a[1])};
                          });
  });

  cat.register_op("SelectIndices", [](const json& p) {
    auto t = param_type_or(p, "type", kU64);
    return make_lambda_op("SelectIndices", p, sig({{"selection", kBit}}, {{"res", t}}),
                          [t](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::select_indices(a[0], t)};
                          });
  });

  cat.register_op("Transpose", [](const json& p) {
    auto t = param_type(p, "type");
    auto it = param_type_or(p, "int_type", kU64);
    return make_lambda_op("Transpose", p,
                          sig({{"segment_length", it}, {"col", t}},
                              {{"res", t}, {"new_segment_length", it}}),
                          [it](const std::vector<Column>& a) {
                            auto [col, nl] = ops::transpose(scalar_index(a[0], "segment length"), a[1]);
                            return std::vector<Column>{col, Column::from_ints(it, {static_cast<i128>(nl)})};
                          });
  });

  cat.register_op("Zip", [](const json& p) {
    auto types = param_types(p);
    return make_lambda_op("Zip", p, sig(numbered(types), {{"res", ElementType::product(types)}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::zip(a)};
                          });
  });

  cat.register_op("Unzip", [](const json& p) {
    auto types = param_types(p);
    return make_lambda_op("Unzip", p, sig({{"col", ElementType::product(types)}}, numbered(types)),
                          [](const std::vector<Column>& a) { return ops::unzip(a[0]); });
  });

  cat.register_op("ComposeSegments", [](const json& p) {
    auto t = param_type(p, "type");
    auto k = param_int(p, "k");
    require(k >= 1, Errc::invalid_argument, "ComposeSegments needs k >= 1");
    auto it = param_type_or(p, "int_type", kU64);
    std::vector<ElementType> comps(static_cast<std::size_t>(k), t);
    return make_lambda_op(
        "ComposeSegments", p, sig({{"segment_length", it}, {"col", t}}, {{"res", ElementType::product(comps)}}),
        [k](const std::vector<Column>& a) {
          auto l = scalar_index(a[0], "segment length");
          require(a[1].size() == l * static_cast<std::uint64_t>(k), Errc::divisibility,
                  "ComposeSegments: length " + std::to_string(a[1].size()) + " is not " +
                      std::to_string(k) + " segments of " + std::to_string(l));
          if (l == 0) {
            std::vector<Column> parts(static_cast<std::size_t>(k), empty_column(a[1].type()));
            return std::vector<Column>{Column::zip(parts)};
          }
          return std::vector<Column>{ops::compose_segments(l, a[1])};
        });
  });

  cat.register_op("Assemble", [](const json& p) {
    auto t = param_type(p, "type");
    auto k = param_int(p, "k");
    require(k >= 1, Errc::invalid_argument, "Assemble needs k >= 1");
    std::vector<ElementType> comps(static_cast<std::size_t>(k), t);
    return make_lambda_op("Assemble", p, sig({{"col", t}}, {{"res", ElementType::product(comps)}}),
                          [k](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::assemble(static_cast<std::uint64_t>(k), a[0])};
                          });
  });

  cat.register_op("Derivative", [](const json& p) {
    auto t = param_type(p, "type");
    ElementType out = t.is_float() ? t : widened_signed(t);
    return make_lambda_op("Derivative", p, sig({{"col", t}}, {{"res", out}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::derivative(a[0])};
                          });
  });

  auto prefix_factory = [](std::string name, std::string fixed_fn, std::string fixed_mode) {
    return [name, fixed_fn, fixed_mode](const json& p) {
      auto t = param_type(p, "type");
      auto ot = param_type_or(p, "out_type", t);
      std::string fn = fixed_fn.empty() ? p.value("fn", std::string("add")) : fixed_fn;
      std::string mode = fixed_mode.empty() ? p.value("mode", std::string("inclusive")) : fixed_mode;
      require(mode == "inclusive" || mode == "exclusive", Errc::invalid_argument,
              "prefix mode must be inclusive or exclusive");
      auto agg = ops::parse_aggregate(fn);
      bool inclusive = mode == "inclusive";
      return make_lambda_op(name, p, sig({{"col", t}}, {{"res", ot}}),
                            [agg, inclusive, ot](const std::vector<Column>& a) {
                              return std::vector<Column>{ops::prefix_aggregate(a[0], agg, inclusive, ot)};
                            });
    };
  };
  cat.register_op("PrefixAggregate", prefix_factory("PrefixAggregate", "", ""));
  cat.register_op("PrefixSum", prefix_factory("PrefixSum", "add", "inclusive"));
  cat.register_op("ExclusivePrefixSum", prefix_factory("ExclusivePrefixSum", "add", "exclusive"));

  cat.register_op("Last", [](const json& p) {
    auto t = param_type(p, "type");
    return make_lambda_op("Last", p, sig({{"col", t}}, {{"res", t}}),
                          [](const std::vector<Column>& a) { return std::vector<Column>{ops::last(a[0])}; });
  });

  cat.register_op("IsSameAsPrevious", [](const json& p) {
    auto t = param_type(p, "type");
    return make_lambda_op("IsSameAsPrevious", p, sig({{"col", t}}, {{"res", kBit}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{ops::is_same_as_previous(a[0])};
                          });
  });

  cat.register_op("SplitFirst", [](const json& p) {
    auto t = param_type(p, "type");
    return make_lambda_op("SplitFirst", p, sig({{"col", t}}, {{"head", t}, {"tail", t}}),
                          [](const std::vector<Column>& a) {
                            auto [h, tail] = ops::split_first(a[0]);
                            return std::vector<Column>{h, tail};
                          });
  });

  cat.register_op("Carve", [](const json& p) {
    int w = static_cast<int>(param_int(p, "w"));
    int pb = static_cast<int>(param_int(p, "p"));
    require(0 < pb && pb < w && w <= 64, Errc::invalid_argument, "Carve requires 0 < p < w <= 64");
    auto t = param_type_or(p, "type", ElementType::u(w));
    return make_lambda_op("Carve", p,
                          sig({{"col", t}}, {{"prefix", ElementType::u(pb)}, {"suffix", ElementType::u(w - pb)}}),
                          [w, pb](const std::vector<Column>& a) {
                            auto [pre, suf] = ops::carve(a[0], w, pb);
                            return std::vector<Column>{pre, suf};
                          });
  });

  cat.register_op("IsPermutation", [](const json& p) {
    auto t = param_type_or(p, "type", kU64);
    return make_lambda_op("IsPermutation", p, sig({{"pos", t}}, {{"accept", kBit}}),
                          [](const std::vector<Column>& a) {
                            return std::vector<Column>{Column::from_bits({ops::is_permutation(a[0])})};
                          });
  });

  cat.register_op("Segmentize", [](const json& p) { return SegmentizeOperator::create(p); });
  cat.register_op("Verify", [](const json& p) { return make_verify_operator(p); });
}

}  // namespace

void register_builtin_ops(OperatorCatalog& catalog) { register_all(catalog); }

}  // namespace colcirc
