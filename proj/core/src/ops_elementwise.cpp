#include <cmath>
#include <set>

#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"

namespace colcirc::ops {

namespace {

const std::set<std::string> kArith = {"add", "sub", "mul", "div", "mod", "min", "max"};
const std::set<std::string> kLogic = {"and", "or", "xor"};
const std::set<std::string> kCompare = {"eq", "ne", "lt", "le", "gt", "ge"};
const std::set<std::string> kUnary = {"not", "in_range", "identity", "cast", "clip_by", "scale"};

bool has_constant(const ElementwiseSpec& s) { return s.constants.contains("constant"); }

i128 json_to_i128(const json& v, const char* what) {
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  require(v.is_number_integer(), Errc::invalid_argument, std::string(what) + " must be an integer");
  if (v.is_number_unsigned()) return static_cast<i128>(v.get<std::uint64_t>());
  return static_cast<i128>(v.get<std::int64_t>());
}

i128 const_int(const ElementwiseSpec& s, const char* key) {
  require(s.constants.contains(key), Errc::invalid_argument,
          s.fn + ": missing constant '" + key + "'");
  return json_to_i128(s.constants.at(key), key);
}

double const_real(const ElementwiseSpec& s, const char* key) {
  require(s.constants.contains(key) && s.constants.at(key).is_number(), Errc::invalid_argument,
          s.fn + ": missing numeric constant '" + key + "'");
  return s.constants.at(key).get<double>();
}

ElementType result_type(const ElementwiseSpec& s) {
  if (kCompare.count(s.fn) || s.fn == "in_range") return ElementType::bit();
  return s.out_type.value_or(s.type);
}

std::vector<ElementType> tuple_types(const ElementwiseSpec& s) {
  require(s.constants.contains("types") && s.constants.at("types").is_array(),
          Errc::invalid_argument, "tuple_make needs a 'types' list");
  std::vector<ElementType> out;
  for (const auto& t : s.constants.at("types")) out.push_back(ElementType::parse(t.get<std::string>()));
  return out;
}

i128 checked(i128 v, const ElementType& t, const std::string& fn, std::size_t i) {
  if (!t.contains(v)) {
    throw Error(Errc::arithmetic_overflow, fn + ": result " + int128_to_string(v) + " at index " +
                                               std::to_string(i) + " outside " + t.to_string());
  }
  return v;
}

i128 arith_int(const std::string& fn, i128 a, i128 b, std::size_t i) {
  i128 r = 0;
  if (fn == "add") {
    if (__builtin_add_overflow(a, b, &r)) fail(Errc::arithmetic_overflow, "add overflow");
  } else if (fn == "sub") {
    if (__builtin_sub_overflow(a, b, &r)) fail(Errc::arithmetic_overflow, "sub overflow");
  } else if (fn == "mul") {
    if (__builtin_mul_overflow(a, b, &r)) fail(Errc::arithmetic_overflow, "mul overflow");
  } else if (fn == "div" || fn == "mod") {
    require(b != 0, Errc::invalid_argument, fn + ": division by zero at index " + std::to_string(i));
    // Floor semantics so that mod is non-negative for positive divisors.
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    r = fn == "div" ? q : a - q * b;
  } else if (fn == "min") {
    r = a < b ? a : b;
  } else if (fn == "max") {
    r = a < b ? b : a;
  }
  return r;
}

double arith_real(const std::string& fn, double a, double b) {
  if (fn == "add") return a + b;
  if (fn == "sub") return a - b;
  if (fn == "mul") return a * b;
  if (fn == "div") return a / b;
  if (fn == "mod") return std::fmod(a, b);
  if (fn == "min") return a < b ? a : b;
  return a < b ? b : a;
}

bool compare(const std::string& fn, int c) {
  if (fn == "eq") return c == 0;
  if (fn == "ne") return c != 0;
  if (fn == "lt") return c < 0;
  if (fn == "le") return c <= 0;
  if (fn == "gt") return c > 0;
  return c >= 0;
}

template <typename T>
int cmp3(T a, T b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

i128 real_to_int(double v, const ElementType& t, std::size_t i) {
  require(std::isfinite(v) && std::floor(v) == v && v >= -1.8e19 && v <= 1.9e19,
          Errc::value_out_of_domain,
          "cast: non-integral float at index " + std::to_string(i));
  i128 r = static_cast<i128>(v);
  return checked(r, t, "cast", i);
}

}  // namespace

int elementwise_arity(const ElementwiseSpec& s) {
  if (kArith.count(s.fn) || kLogic.count(s.fn) || kCompare.count(s.fn)) {
    return has_constant(s) ? 1 : 2;
  }
  if (kUnary.count(s.fn) || s.fn == "carve") return 1;
  if (s.fn == "if_else") return 3;
  if (s.fn == "tuple_make") return static_cast<int>(tuple_types(s).size());
  fail(Errc::invalid_argument, "unknown elementwise function '" + s.fn + "'");
}

std::vector<std::string> elementwise_input_labels(const ElementwiseSpec& s) {
  int k = elementwise_arity(s);
  if (s.fn == "if_else") return {"cond", "lhs", "rhs"};
  if (s.fn == "tuple_make") {
    std::vector<std::string> out;
    for (int j = 0; j < k; ++j) out.push_back("c" + std::to_string(j));
    return out;
  }
  if (k == 2) return {"lhs", "rhs"};
  return {"col"};
}

std::vector<Port> elementwise_outputs(const ElementwiseSpec& s) {
  if (s.fn == "carve") {
    int w = static_cast<int>(const_int(s, "w"));
    int p = static_cast<int>(const_int(s, "p"));
    require(0 < p && p < w && w <= 64, Errc::invalid_argument, "carve requires 0 < p < w <= 64");
    return {{"prefix", ElementType::u(p)}, {"suffix", ElementType::u(w - p)}};
  }
  if (s.fn == "tuple_make") return {{"res", ElementType::product(tuple_types(s))}};
  return {{"res", result_type(s)}};
}

std::vector<Column> elementwise(const ElementwiseSpec& s, const std::vector<Column>& args) {
  int arity = elementwise_arity(s);
  require(static_cast<int>(args.size()) == arity, Errc::invalid_argument,
          s.fn + ": expected " + std::to_string(arity) + " arguments");
  std::size_t n = args.empty() ? 0 : args.front().size();
  for (const auto& a : args) {
    require(a.size() == n, Errc::length_mismatch,
            s.fn + ": argument lengths " + std::to_string(a.size()) + " vs " + std::to_string(n));
  }
  const std::string& fn = s.fn;

  if (fn == "tuple_make") return {Column::zip(args)};

  if (fn == "carve") {
    int w = static_cast<int>(const_int(s, "w"));
    auto [pre, suf] = carve(args[0], w, static_cast<int>(const_int(s, "p")));
    return {pre, suf};
  }

  ElementType out_t = result_type(s);
  const Column& a = args[0];

  if (fn == "if_else") {
    require(a.type().is_bit(), Errc::type_mismatch, "if_else condition must be bit");
    std::vector<std::size_t> idx(n);
    Column both = concat({args[2], args[1]});
    for (std::size_t i = 0; i < n; ++i) idx[i] = a.bit(i) ? n + i : i;
    return {take(both, idx)};
  }

  if (fn == "identity") return {a};

  ColumnBuilder out(out_t, n);

  if (fn == "cast") {
    for (std::size_t i = 0; i < n; ++i) {
      if (out_t.is_float()) {
        out.push_real(a.real(i));
      } else if (a.type().is_float()) {
        out.push_raw(static_cast<std::uint64_t>(real_to_int(a.real(i), out_t, i)));
      } else {
        out.push_raw(static_cast<std::uint64_t>(checked(a.integer(i), out_t, "cast", i)));
      }
    }
    return {out.finish()};
  }

  if (fn == "in_range") {
    if (a.type().is_float()) {
      double lo = const_real(s, "lo"), hi = const_real(s, "hi");
      for (std::size_t i = 0; i < n; ++i) out.push_raw(a.real(i) >= lo && a.real(i) <= hi);
    } else {
      i128 lo = const_int(s, "lo"), hi = const_int(s, "hi");
      for (std::size_t i = 0; i < n; ++i) out.push_raw(a.integer(i) >= lo && a.integer(i) <= hi);
    }
    return {out.finish()};
  }

  if (fn == "not") {
    if (a.type().is_bit()) {
      for (std::size_t i = 0; i < n; ++i) out.push_raw(a.bit(i) ? 0 : 1);
    } else {
      require(a.type().is_unsigned(), Errc::type_mismatch, "not requires bit or unsigned");
      std::uint64_t mask = a.type().width() == 64 ? ~0ull : ((1ull << a.type().width()) - 1);
      for (std::size_t i = 0; i < n; ++i) out.push_raw(~a.raw(i) & mask);
    }
    return {out.finish()};
  }

  if (fn == "clip_by" || fn == "scale") {
    require(a.type().is_exact(), Errc::type_mismatch, fn + " requires an integer column");
    i128 k = const_int(s, "k");
    require(fn == "scale" || k > 0, Errc::invalid_argument, "clip_by modulus must be positive");
    for (std::size_t i = 0; i < n; ++i) {
      i128 r = fn == "scale" ? arith_int("mul", a.integer(i), k, i) : arith_int("mod", a.integer(i), k, i);
      out.push_raw(static_cast<std::uint64_t>(checked(r, out_t, fn, i)));
    }
    return {out.finish()};
  }

  bool unary_const = has_constant(s);
  const Column* b = unary_const ? nullptr : &args[1];
  if (b) {
    require(a.type() == b->type(), Errc::type_mismatch,
            fn + ": argument types " + a.type().to_string() + " vs " + b->type().to_string());
  }

  if (kLogic.count(fn)) {
    require(a.type().is_bit() || a.type().is_unsigned(), Errc::type_mismatch,
            fn + " requires bit or unsigned arguments");
    std::uint64_t c = unary_const ? static_cast<std::uint64_t>(const_int(s, "constant")) : 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t x = a.raw(i), y = b ? b->raw(i) : c;
      out.push_raw(fn == "and" ? (x & y) : fn == "or" ? (x | y) : (x ^ y));
    }
    return {out.finish()};
  }

  if (kCompare.count(fn)) {
    if (a.type().is_float()) {
      double c = unary_const ? const_real(s, "constant") : 0.0;
      for (std::size_t i = 0; i < n; ++i) out.push_raw(compare(fn, cmp3(a.real(i), b ? b->real(i) : c)));
    } else if (a.type().is_exact()) {
      i128 c = unary_const ? const_int(s, "constant") : 0;
      for (std::size_t i = 0; i < n; ++i) {
        out.push_raw(compare(fn, cmp3(a.integer(i), b ? b->integer(i) : c)));
      }
    } else {
      require(!unary_const && (fn == "eq" || fn == "ne"), Errc::type_mismatch,
              fn + " unsupported for " + a.type().to_string());
      for (std::size_t i = 0; i < n; ++i) out.push_raw(compare(fn, a.value(i) == b->value(i) ? 0 : 1));
    }
    return {out.finish()};
  }

  if (kArith.count(fn)) {
    if (a.type().is_float()) {
      double c = unary_const ? const_real(s, "constant") : 0.0;
      for (std::size_t i = 0; i < n; ++i) out.push_real(arith_real(fn, a.real(i), b ? b->real(i) : c));
    } else {
      require(a.type().is_integer(), Errc::type_mismatch, fn + " requires numeric arguments");
      i128 c = unary_const ? const_int(s, "constant") : 0;
      for (std::size_t i = 0; i < n; ++i) {
        i128 r = arith_int(fn, a.integer(i), b ? b->integer(i) : c, i);
        out.push_raw(static_cast<std::uint64_t>(checked(r, out_t, fn, i)));
      }
    }
    return {out.finish()};
  }

  fail(Errc::invalid_argument, "unknown elementwise function '" + fn + "'");
}

namespace {

ElementwiseSpec binary(const std::string& fn, const Column& a) {
  return ElementwiseSpec{fn, a.type(), std::nullopt, json::object()};
}

}  // namespace

Column add(const Column& a, const Column& b) { return elementwise(binary("add", a), {a, b})[0]; }
Column sub(const Column& a, const Column& b) { return elementwise(binary("sub", a), {a, b})[0]; }
Column mul(const Column& a, const Column& b) { return elementwise(binary("mul", a), {a, b})[0]; }
Column logical_and(const Column& a, const Column& b) {
  return elementwise(binary("and", a), {a, b})[0];
}

Column in_range(const Column& a, i128 lo, i128 hi) {
  auto spec = binary("in_range", a);
  spec.constants = {{"lo", static_cast<std::int64_t>(lo)}, {"hi", static_cast<std::int64_t>(hi)}};
  return elementwise(spec, {a})[0];
}

Column cast(const Column& a, const ElementType& to) {
  if (a.type() == to) return a;
  ElementwiseSpec spec{"cast", a.type(), to, json::object()};
  return elementwise(spec, {a})[0];
}

}  // namespace colcirc::ops
