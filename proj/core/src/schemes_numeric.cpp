// Generated, run, spline, frame-of-reference, delta and width schemes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "colcirc/ops.hpp"
#include "colcirc/schemes.hpp"
#include "scheme_support.hpp"

namespace colcirc::detail {

namespace {

const i128 kI64Min = std::numeric_limits<std::int64_t>::min();
const i128 kI64Max = std::numeric_limits<std::int64_t>::max();

ElementType type_at(const TypeMap& t, const std::string& label) {
  auto it = t.find(label);
  require(it != t.end(), Errc::missing_input, "decoder: no encoded column '" + label + "'");
  return it->second;
}

const Column& int_input(const ColumnFamily& in) {
  const Column& col = input_column(in);
  require(col.type().is_integer(), Errc::type_mismatch, "an integer column is required");
  return col;
}

std::vector<i128> values_of(const Column& c) { return c.integers(); }

void require_i64_values(const std::vector<i128>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < kI64Min || v[i] > kI64Max) {
      not_encodable("value at index " + std::to_string(i) + " exceeds the i64 working range");
    }
  }
}

Wire broadcast_const(CircuitBuilder& b, const ElementType& t, json v, const Wire& like) {
  return broadcast(b, b.constant(t, std::move(v)), like);
}

// Element j of a column as a length-1 column.
Wire element(CircuitBuilder& b, const Wire& col, std::uint64_t j) {
  return b.gather(b.constant(kU64, j), col);
}

// --------------------------------------------------------------- constant

void register_constant(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "constant";
  e.summary = "all elements equal to one value";
  e.param_schema = {{"length_type", "type of the length scalar (default u32)"}};
  e.build_decoder = [](const json&, const TypeMap& t) {
    CircuitBuilder b;
    auto v = b.input("value", type_at(t, "value"));
    auto n = b.input("length", type_at(t, "length"));
    b.output(kColumnLabel, b.replicate(v, n));
    return b.build();
  };
  e.encode = [](const json& p, const ColumnFamily& in) {
    const Column& col = input_column(in);
    ElementType lt = ptype(p, "length_type", kU32);
    Column value;
    if (col.empty()) {
      if (col.type().is_product()) not_encodable("empty product column has no representative value");
      value = zero_scalar(col.type());
    } else {
      for (std::size_t i = 1; i < col.size(); ++i) {
        if (!(col.value(i) == col.value(0))) {
          not_encodable("column is not constant (index " + std::to_string(i) + " differs)");
        }
      }
      value = slice(col, 0, 1);
    }
    return SchemeInstance{"", json{{"length_type", lt.to_string()}},
                          {{"value", value}, {"length", scalar_of(lt, col.size(), "length")}}};
  };
  e.verify = [](const json&, const ColumnFamily& c) {
    expect_labels(c, {"value", "length"});
    check(need(c, "value").size() == 1, "value must be a single element");
    need_scalar(c, "length");
    return VerifyResult::accept();
  };
  e.approximate = [](const json& p, const Column& col) {
    ElementType lt = ptype(p, "length_type", kU32);
    Column value;
    if (col.empty()) {
      value = zero_scalar(col.type());
    } else {
      auto freq = frequency_distribution(col);
      auto best = std::max_element(freq.entries.begin(), freq.entries.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
      value = Column::from_values(col.type(), {best->first});
    }
    return SchemeInstance{"constant", json{{"length_type", lt.to_string()}},
                          {{"value", value}, {"length", scalar_of(lt, col.size(), "length")}}};
  };
  register_range_checked(reg, std::move(e));
}

// -------------------------------------------------------------- generated

struct Basis {
  enum class Kind { pow, mod, div } kind;
  std::int64_t arg;
};

Basis parse_basis(const std::string& id) {
  auto colon = id.find(':');
  require(colon != std::string::npos, Errc::invalid_argument, "basis id '" + id + "' needs kind:arg");
  std::string kind = id.substr(0, colon);
  std::int64_t arg = 0;
  try {
    arg = std::stoll(id.substr(colon + 1));
  } catch (const std::exception&) {
    fail(Errc::invalid_argument, "basis id '" + id + "' has a non-integer argument");
  }
  if (kind == "pow") {
    require(arg >= 0 && arg <= 16, Errc::invalid_argument, "pow degree must be in 0..16");
    return {Basis::Kind::pow, arg};
  }
  require(arg >= 1, Errc::invalid_argument, "basis '" + id + "' needs a positive argument");
  if (kind == "mod") return {Basis::Kind::mod, arg};
  if (kind == "div") return {Basis::Kind::div, arg};
  fail(Errc::invalid_argument, "unknown basis kind '" + kind + "'");
}

std::vector<Basis> basis_of(const json& p) {
  if (p.contains("degree") && !p.contains("basis")) {
    auto d = param_int(p, "degree");
    require(d >= 0 && d <= 16, Errc::invalid_argument, "degree must be in 0..16");
    std::vector<Basis> out;
    for (std::int64_t j = 0; j <= d; ++j) out.push_back({Basis::Kind::pow, j});
    return out;
  }
  require(p.contains("basis") && p["basis"].is_array(), Errc::invalid_argument,
          "generated needs a 'basis' list");
  std::vector<Basis> out;
  for (const auto& id : p["basis"]) out.push_back(parse_basis(id.get<std::string>()));
  return out;
}

double basis_value(const Basis& f, double x) {
  switch (f.kind) {
    case Basis::Kind::pow: return std::pow(x, static_cast<double>(f.arg));
    case Basis::Kind::mod: return std::fmod(x, static_cast<double>(f.arg));
    case Basis::Kind::div: return std::floor(x / static_cast<double>(f.arg));
  }
  return 0;
}

std::optional<i128> basis_value_exact(const Basis& f, i128 x) {
  switch (f.kind) {
    case Basis::Kind::pow: {
      i128 r = 1;
      for (std::int64_t j = 0; j < f.arg; ++j) {
        if (__builtin_mul_overflow(r, x, &r) || r > kI64Max) return std::nullopt;
      }
      return r;
    }
    case Basis::Kind::mod: return x % f.arg;
    case Basis::Kind::div: return x / f.arg;
  }
  return std::nullopt;
}

std::optional<std::vector<i128>> generated_values(const std::vector<Basis>& basis,
                                                  const std::vector<i128>& coeffs, std::size_t n) {
  std::vector<i128> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    i128 acc = 0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      auto f = basis_value_exact(basis[j], static_cast<i128>(i));
      i128 term;
      if (!f || __builtin_mul_overflow(coeffs[j], *f, &term) || __builtin_add_overflow(acc, term, &acc) ||
          acc < kI64Min || acc > kI64Max) {
        return std::nullopt;
      }
    }
    out[i] = acc;
  }
  return out;
}

Wire basis_term(CircuitBuilder& b, const Basis& f, const Wire& x) {
  switch (f.kind) {
    case Basis::Kind::pow: {
      if (f.arg == 0) return broadcast_const(b, kI64, 1, x);
      Wire acc = x;
      for (std::int64_t j = 1; j < f.arg; ++j) acc = b.ew("mul", {acc, x});
      return acc;
    }
    case Basis::Kind::mod: return b.ew_const("mod", x, f.arg);
    case Basis::Kind::div: return b.ew_const("div", x, f.arg);
  }
  return x;
}

Circuit generated_decoder(const json& p, const TypeMap& t) {
  auto basis = basis_of(p);
  ElementType out = ptype(p, "type", kI64);
  CircuitBuilder b;
  auto coeffs = b.input("coefficients", type_at(t, "coefficients"));
  auto n = b.input("length", type_at(t, "length"));
  Wire c64 = b.cast(coeffs, kI64);
  Wire x = b.iota(n, kI64);
  std::optional<Wire> acc;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    Wire cj = broadcast(b, element(b, c64, j), x);
    Wire term = b.ew("mul", {cj, basis_term(b, basis[j], x)});
    acc = acc ? b.ew("add", {*acc, term}) : term;
  }
  if (!acc) acc = broadcast_const(b, kI64, 0, x);
  b.output(kColumnLabel, b.cast(*acc, out));
  return b.build();
}

// Least squares by normal equations; columns with a vanishing pivot get 0.
std::vector<double> least_squares(const std::vector<Basis>& basis, const std::vector<i128>& y) {
  std::size_t k = basis.size();
  std::vector<std::vector<long double>> a(k, std::vector<long double>(k + 1, 0));
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::vector<long double> f(k);
    for (std::size_t j = 0; j < k; ++j) f[j] = basis_value(basis[j], static_cast<double>(i));
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) a[r][c] += f[r] * f[c];
      a[r][k] += f[r] * static_cast<long double>(y[i]);
    }
  }
  std::vector<int> pivot_col(k, -1);
  std::size_t row = 0;
  for (std::size_t c = 0; c < k && row < k; ++c) {
    std::size_t best = row;
    for (std::size_t r = row; r < k; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[best][c])) best = r;
    }
    if (std::fabs(a[best][c]) < 1e-12L) continue;
    std::swap(a[row], a[best]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == row) continue;
      long double f = a[r][c] / a[row][c];
      for (std::size_t cc = c; cc <= k; ++cc) a[r][cc] -= f * a[row][cc];
    }
    pivot_col[row] = static_cast<int>(c);
    ++row;
  }
  std::vector<double> out(k, 0.0);
  for (std::size_t r = 0; r < row; ++r) {
    out[pivot_col[r]] = static_cast<double>(a[r][k] / a[r][pivot_col[r]]);
  }
  return out;
}

std::vector<i128> rounded(const std::vector<double>& v) {
  std::vector<i128> out;
  for (double x : v) {
    double r = std::nearbyint(x);
    out.push_back(std::isfinite(r) && std::fabs(r) < 9e18 ? static_cast<i128>(r) : 0);
  }
  return out;
}

SchemeInstance generated_instance(const std::string& id, json params, const ElementType& t,
                                  const std::vector<i128>& coeffs, std::size_t n) {
  ElementType lt = ptype(params, "length_type", kU32);
  params["type"] = t.to_string();
  params["length_type"] = lt.to_string();
  return SchemeInstance{id, std::move(params),
                        {{"coefficients", int_column(kI64, coeffs, "coefficients")},
                         {"length", scalar_of(lt, n, "length")}}};
}

VerifyResult verify_generated(const json& p, const ColumnFamily& c) {
  expect_labels(c, {"coefficients", "length"});
  auto basis = basis_of(p);
  need_typed(c, "coefficients", kI64);
  check(need(c, "coefficients").size() == basis.size(), "coefficient count differs from the basis size");
  need_scalar(c, "length");
  return VerifyResult::accept();
}

void register_generated(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "generated";
    e.summary = "integer linear combination of basis functions of the index";
    e.param_schema = {{"basis", "list of basis ids: pow:d, mod:m, div:m"},
                      {"type", "decoded type"},
                      {"length_type", "length scalar type (default u32)"}};
    e.build_decoder = generated_decoder;
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = int_input(in);
      auto basis = basis_of(p);
      auto y = values_of(col);
      require_i64_values(y);
      auto coeffs = rounded(least_squares(basis, y));
      auto got = generated_values(basis, coeffs, y.size());
      if (!got || *got != y) not_encodable("no integer combination of the basis reproduces the column");
      return generated_instance("generated", p, col.type(), coeffs, y.size());
    };
    e.verify = verify_generated;
    register_range_checked(reg, std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "generated.poly";
    e.summary = "polynomial of the index with integer coefficients";
    e.param_schema = {{"degree", "polynomial degree (default 1)"},
                      {"type", "decoded type"},
                      {"length_type", "length scalar type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      json q = p;
      q["degree"] = param_int_or(p, "degree", 1);
      return generated_decoder(q, t);
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = int_input(in);
      auto d = param_int_or(p, "degree", 1);
      require(d >= 0 && d <= 16, Errc::invalid_argument, "degree must be in 0..16");
      auto y = values_of(col);
      require_i64_values(y);
      auto coeffs = fit_integer_polynomial(y, static_cast<int>(d + 1));
      if (!coeffs) not_encodable("no integer polynomial of degree " + std::to_string(d) + " fits");
      json q = p;
      q["degree"] = d;
      return generated_instance("generated.poly", q, col.type(), *coeffs, y.size());
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      json q = p;
      q["degree"] = param_int_or(p, "degree", 1);
      return verify_generated(q, c);
    };
    // Rounded least squares; lowers the degree until all values stay in range.
    e.approximate = [](const json& p, const Column& col) {
      require(col.type().is_integer(), Errc::type_mismatch, "an integer column is required");
      ElementType t = ptype(p, "type", col.type());
      auto y = values_of(col);
      require_i64_values(y);
      for (auto d = param_int_or(p, "degree", 1); d >= 0; --d) {
        json q = p;
        q["degree"] = d;
        auto basis = basis_of(q);
        auto coeffs = rounded(least_squares(basis, y));
        auto got = generated_values(basis, coeffs, y.size());
        bool fits = got && std::all_of(got->begin(), got->end(), [&](i128 v) { return t.contains(v); });
        if (fits) return generated_instance("generated.poly", q, t, coeffs, y.size());
      }
      // Degree 0 with the rounded mean is always in range.
      not_encodable("no in-range polynomial approximation");
    };
    register_range_checked(reg, std::move(e));
  }
}

// ---------------------------------------------------------------- nullsup

SchemeInstance nullsup_encode(const json& p, const ColumnFamily& in) {
  const Column& col = int_input(in);
  ElementType narrow = col.empty() ? ptype(p, "narrow_type", ElementType::u(8))
                                   : ptype(p, "narrow_type", [&] {
                                       auto [lo, hi] = int_range(col);
                                       return narrowest_fitting(lo, hi);
                                     }());
  require(narrow.is_integer(), Errc::invalid_argument, "narrow_type must be an integer type");
  ColumnBuilder b(narrow, col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (!narrow.contains(col.integer(i))) {
      not_encodable("value " + int128_to_string(col.integer(i)) + " at index " + std::to_string(i) +
                    " does not fit " + narrow.to_string());
    }
    b.push_int(col.integer(i));
  }
  return SchemeInstance{"", json{{"type", col.type().to_string()}, {"narrow_type", narrow.to_string()}},
                        {{"data", b.finish()}}};
}

void register_nullsup(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "nullsup";
  e.summary = "integers stored in a narrower type and cast back";
  e.param_schema = {{"type", "decoded type"}, {"narrow_type", "storage type (default: narrowest fitting)"}};
  e.build_decoder = [](const json& p, const TypeMap& t) {
    CircuitBuilder b;
    auto data = b.input("data", type_at(t, "data"));
    b.output(kColumnLabel, b.ew("cast", {data}, json{{"out_type", ptype(p, "type", kI64).to_string()}}));
    return b.build();
  };
  e.encode = nullsup_encode;
  e.verify = [](const json& p, const ColumnFamily& c) {
    expect_labels(c, {"data"});
    const Column& data = need(c, "data");
    check(data.type().is_integer(), "data must be integers");
    if (p.contains("narrow_type")) check(data.type() == ptype(p, "narrow_type", kI64), "data type differs from narrow_type");
    ElementType t = ptype(p, "type", kI64);
    check(t.is_integer(), "decoded type must be an integer type");
    if (!(t.contains(data.type().min_value()) && t.contains(data.type().max_value()))) {
      for (std::size_t i = 0; i < data.size(); ++i) {
        check(t.contains(data.integer(i)), "value at index " + std::to_string(i) + " does not fit " + t.to_string());
      }
    }
    return VerifyResult::accept();
  };
  e.approximate = [](const json& p, const Column& col) {
    require(col.type().is_integer(), Errc::type_mismatch, "an integer column is required");
    ElementType t = ptype(p, "type", col.type());
    if (!p.contains("narrow_type")) {
      json q = p;
      q["type"] = t.to_string();
      auto inst = nullsup_encode(q, {{kColumnLabel, ops::cast(col, t)}});
      inst.scheme_id = "nullsup";
      return inst;
    }
    ElementType narrow = ptype(p, "narrow_type", kI64);
    i128 lo = std::max(narrow.min_value(), t.min_value()), hi = std::min(narrow.max_value(), t.max_value());
    ColumnBuilder b(narrow, col.size());
    for (std::size_t i = 0; i < col.size(); ++i) b.push_int(std::clamp(col.integer(i), lo, hi));
    return SchemeInstance{"nullsup", json{{"type", t.to_string()}, {"narrow_type", narrow.to_string()}},
                          {{"data", b.finish()}}};
  };
  register_range_checked(reg, std::move(e));
}

// ------------------------------------------------------------------- runs

struct Runs {
  std::vector<std::uint64_t> start, length;
  std::vector<std::size_t> first;  // index of each run's first element
};

Runs runs_of(const Column& col) {
  Runs r;
  bool product = col.type().is_product();
  for (std::size_t i = 0; i < col.size(); ++i) {
    bool same = i > 0 && (product ? col.value(i) == col.value(i - 1) : col.raw(i) == col.raw(i - 1));
    if (same) {
      ++r.length.back();
    } else {
      r.start.push_back(i);
      r.length.push_back(1);
      r.first.push_back(i);
    }
  }
  return r;
}

void check_positive(const Column& lengths, const std::string& what, std::uint64_t cap = 0) {
  expect_index_type(lengths, what);
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    check(lengths.u64(i) > 0, what + ": zero-length run at " + std::to_string(i));
    if (cap) check(lengths.u64(i) <= cap, what + ": run " + std::to_string(i) + " exceeds the cap");
  }
}

Circuit rle_decoder(const TypeMap& t) {
  CircuitBuilder b;
  auto v = b.input("value", type_at(t, "value"));
  auto len = b.input("length", type_at(t, "length"));
  b.output(kColumnLabel, b.gather(b.expand_runs(len), v));
  return b.build();
}

void register_runs(CodecRegistry& reg) {
  const json schema = {{"length_type", "run length / position type (default u32)"}};
  {
    CodecEntry e;
    e.scheme_id = "run.full";
    e.summary = "runs with start position, length and value";
    e.param_schema = schema;
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      b.input("start", type_at(t, "start"));
      auto v = b.input("value", type_at(t, "value"));
      auto len = b.input("length", type_at(t, "length"));
      b.output(kColumnLabel, b.gather(b.expand_runs(len), v));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType lt = ptype(p, "length_type", kU32);
      Runs r = runs_of(col);
      return SchemeInstance{"", json{{"length_type", lt.to_string()}},
                            {{"start", index_column(lt, r.start, "start")},
                             {"length", index_column(lt, r.length, "length")},
                             {"value", take(col, r.first)}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"start", "length", "value"});
      check(need(c, "value").size() == need(c, "length").size(), "value and length differ in count");
      check_positive(need(c, "length"), "length");
      const Column& s = need(c, "start");
      const Column& l = need(c, "length");
      check(s.size() == l.size(), "start and length differ in count");
      expect_index_type(s, "start");
      std::uint64_t at = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        check(s.u64(i) == at, "run " + std::to_string(i) + " leaves a gap or overlaps");
        at += l.u64(i);
      }
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "run.rle";
    e.summary = "run-length encoding: value and length per run";
    e.param_schema = schema;
    e.build_decoder = [](const json&, const TypeMap& t) { return rle_decoder(t); };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType lt = ptype(p, "length_type", kU32);
      Runs r = runs_of(col);
      return SchemeInstance{"", json{{"length_type", lt.to_string()}},
                            {{"length", index_column(lt, r.length, "length")}, {"value", take(col, r.first)}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"value", "length"});
      check(need(c, "value").size() == need(c, "length").size(), "value and length differ in count");
      check_positive(need(c, "length"), "length");
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "run.rle.capped";
    e.summary = "run-length encoding with every run at most r long";
    e.param_schema = {{"r", "run length cap"}, {"length_type", "run length type (default u32)"}};
    e.build_decoder = [](const json&, const TypeMap& t) { return rle_decoder(t); };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType lt = ptype(p, "length_type", kU32);
      auto cap = param_int(p, "r");
      require(cap >= 1, Errc::invalid_argument, "r must be positive");
      std::uint64_t r = static_cast<std::uint64_t>(cap);
      Runs runs = runs_of(col);
      std::vector<std::uint64_t> lengths;
      std::vector<std::size_t> first;
      for (std::size_t k = 0; k < runs.length.size(); ++k) {
        std::uint64_t len = runs.length[k];
        for (std::uint64_t q = 0; q < len / r; ++q) lengths.push_back(r), first.push_back(runs.first[k]);
        if (len % r) lengths.push_back(len % r), first.push_back(runs.first[k]);
      }
      return SchemeInstance{"", json{{"r", cap}, {"length_type", lt.to_string()}},
                            {{"length", index_column(lt, lengths, "length")}, {"value", take(col, first)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"value", "length"});
      auto cap = param_int(p, "r");
      check(cap >= 1, "r must be positive");
      check(need(c, "value").size() == need(c, "length").size(), "value and length differ in count");
      check_positive(need(c, "length"), "length", static_cast<std::uint64_t>(cap));
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "run.rpe";
    e.summary = "run position encoding: start and value per run plus the overall length";
    e.param_schema = schema;
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto v = b.input("value", type_at(t, "value"));
      auto start = b.input("start", type_at(t, "start"));
      auto n = b.input("overall_length", type_at(t, "overall_length"));
      Wire canvas = b.replicate(b.constant(kU64, 0), b.cast(n, kU64));
      Wire marks = b.scatter(canvas, start, broadcast_const(b, kU64, 1, start));
      Wire ids = b.ew_const("sub", b.prefix_sum(marks), 1);
      b.output(kColumnLabel, b.gather(ids, v));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType lt = ptype(p, "length_type", kU32);
      Runs r = runs_of(col);
      return SchemeInstance{"", json{{"length_type", lt.to_string()}},
                            {{"value", take(col, r.first)},
                             {"start", index_column(lt, r.start, "start")},
                             {"overall_length", scalar_of(lt, col.size(), "overall_length")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"value", "start", "overall_length"});
      std::uint64_t n = need_scalar(c, "overall_length");
      const Column& s = need(c, "start");
      expect_index_type(s, "start");
      check(s.size() == need(c, "value").size(), "start and value differ in count");
      check((n == 0) == (s.size() == 0), "runs must be present exactly when the column is non-empty");
      if (s.size() > 0) {
        check(s.u64(0) == 0, "first run must start at 0");
        check(strictly_increasing(s), "run starts must be strictly increasing");
        check(s.u64(s.size() - 1) < n, "run start beyond the column");
      }
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
}

// ----------------------------------------------------------------- splines

int coefficient_count(const json& p) {
  auto d = param_int_or(p, "degree", 1);
  require(d >= 0 && d <= 8, Errc::invalid_argument, "degree must be in 0..8");
  return static_cast<int>(d + 1);
}

// Horner evaluation of segment `seg`'s k coefficients at offsets x (i64).
Wire piecewise_poly(CircuitBuilder& b, const Wire& seg, const Wire& x, const Wire& coeffs, int k) {
  Wire base = b.ew("scale", {seg}, json{{"k", k}});
  auto at = [&](int j) { return b.gather(j == 0 ? base : b.ew_const("add", base, j), coeffs); };
  Wire acc = at(k - 1);
  for (int j = k - 2; j >= 0; --j) acc = b.ew("add", {b.ew("mul", {acc, x}), at(j)});
  return acc;
}

// x = i - start[seg] for every element i.
Wire offsets_in_segment(CircuitBuilder& b, const Wire& seg, const Wire& starts) {
  Wire i = b.iota(b.length(seg), kI64);
  return b.ew("sub", {i, b.cast(b.gather(seg, starts), kI64)});
}

struct PolySegment {
  std::size_t start, length;
  std::vector<i128> coeffs;
};

std::optional<std::vector<i128>> fit_i64(const std::vector<i128>& y, int k) {
  auto c = fit_integer_polynomial(y, k);
  if (!c) return std::nullopt;
  for (auto v : *c) {
    if (v < kI64Min || v > kI64Max) return std::nullopt;
  }
  return c;
}

bool poly_matches(const std::vector<i128>& c, i128 x, i128 y) {
  try {
    i128 v = eval_polynomial(c, x);
    return v == y;
  } catch (const Error&) {
    return false;
  }
}

// Greedy longest-fit segmentation: each segment extends while its polynomial,
// determined by its first points, keeps matching.
std::vector<PolySegment> greedy_segments(const std::vector<i128>& y, int k) {
  std::vector<PolySegment> out;
  std::size_t s = 0;
  while (s < y.size()) {
    std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(k), y.size() - s);
    std::optional<std::vector<i128>> c;
    for (; m >= 1; --m) {
      c = fit_i64(std::vector<i128>(y.begin() + s, y.begin() + s + m), k);
      if (c) break;
    }
    std::size_t len = m;
    while (s + len < y.size() && poly_matches(*c, static_cast<i128>(len), y[s + len])) ++len;
    out.push_back({s, len, *c});
    s += len;
  }
  return out;
}

Column coefficient_column(const std::vector<PolySegment>& segs) {
  std::vector<i128> all;
  for (const auto& s : segs) all.insert(all.end(), s.coeffs.begin(), s.coeffs.end());
  return int_column(kI64, all, "coefficients");
}

void register_splines(CodecRegistry& reg) {
  const json schema = {{"degree", "polynomial degree per segment (default 1)"},
                       {"type", "decoded type"},
                       {"index_type", "position type (default u32)"}};
  {
    CodecEntry e;
    e.scheme_id = "spline.generalized";
    e.summary = "piecewise polynomial over gap-free segments of any length";
    e.param_schema = schema;
    e.build_decoder = [](const json& p, const TypeMap& t) {
      int k = coefficient_count(p);
      CircuitBuilder b;
      auto starts = b.input("segment_start_pos", type_at(t, "segment_start_pos"));
      auto lens = b.input("segment_length", type_at(t, "segment_length"));
      auto coeffs = b.input("coefficients", type_at(t, "coefficients"));
      Wire seg = b.expand_runs(lens);
      Wire v = piecewise_poly(b, seg, offsets_in_segment(b, seg, starts), coeffs, k);
      b.output(kColumnLabel, b.cast(v, ptype(p, "type", kI64)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = int_input(in);
      int k = coefficient_count(p);
      ElementType it = ptype(p, "index_type", kU32);
      auto y = values_of(col);
      require_i64_values(y);
      auto segs = greedy_segments(y, k);
      std::vector<std::uint64_t> starts, lens;
      for (const auto& s : segs) starts.push_back(s.start), lens.push_back(s.length);
      return SchemeInstance{
          "", json{{"degree", k - 1}, {"type", col.type().to_string()}, {"index_type", it.to_string()}},
          {{"segment_start_pos", index_column(it, starts, "segment_start_pos")},
           {"segment_length", index_column(it, lens, "segment_length")},
           {"coefficients", coefficient_column(segs)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"segment_start_pos", "segment_length", "coefficients"});
      int k = coefficient_count(p);
      const Column& s = need(c, "segment_start_pos");
      const Column& l = need(c, "segment_length");
      check(s.size() == l.size(), "start and length differ in count");
      check_positive(l, "segment_length");
      expect_index_type(s, "segment_start_pos");
      std::uint64_t at = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        check(s.u64(i) == at, "segment " + std::to_string(i) + " leaves a gap or overlaps");
        at += l.u64(i);
      }
      need_typed(c, "coefficients", kI64);
      check(need(c, "coefficients").size() == s.size() * static_cast<std::size_t>(k),
            "coefficient count must be k per segment");
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "spline.knotted";
    e.summary = "piecewise polynomial between knots; the last knot is the last index";
    e.param_schema = schema;
    e.build_decoder = [](const json& p, const TypeMap& t) {
      int k = coefficient_count(p);
      CircuitBuilder b;
      auto knots = b.input("knots", type_at(t, "knots"));
      auto coeffs = b.input("coefficients", type_at(t, "coefficients"));
      Wire d = b.derivative(b.cast(knots, kI64));
      Wire m = b.length(d);
      // The final segment includes the last knot.
      Wire last_pos = b.ew_const("sub", m, 1);
      Wire lens = b.scatter(d, last_pos, b.ew_const("add", b.last(d), 1));
      Wire starts = b.gather(b.iota(m), knots);
      Wire seg = b.expand_runs(lens);
      Wire v = piecewise_poly(b, seg, offsets_in_segment(b, seg, starts), coeffs, k);
      b.output(kColumnLabel, b.cast(v, ptype(p, "type", kI64)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = int_input(in);
      if (col.empty()) not_encodable("knotted spline needs at least one element");
      int k = coefficient_count(p);
      ElementType it = ptype(p, "index_type", kU32);
      auto y = values_of(col);
      require_i64_values(y);
      auto segs = greedy_segments(y, k);
      std::vector<std::uint64_t> knots;
      for (const auto& s : segs) knots.push_back(s.start);
      knots.push_back(y.size() - 1);
      return SchemeInstance{
          "", json{{"degree", k - 1}, {"type", col.type().to_string()}, {"index_type", it.to_string()}},
          {{"knots", index_column(it, knots, "knots")}, {"coefficients", coefficient_column(segs)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"knots", "coefficients"});
      int k = coefficient_count(p);
      const Column& knots = need(c, "knots");
      expect_index_type(knots, "knots");
      check(knots.size() >= 2, "at least two knots are required");
      check(knots.u64(0) == 0, "first knot must be 0");
      std::size_t m = knots.size() - 1;
      for (std::size_t i = 1; i < knots.size(); ++i) {
        bool final_pair = i == m;
        check(final_pair ? knots.u64(i) >= knots.u64(i - 1) : knots.u64(i) > knots.u64(i - 1),
              "knots must increase (only the final knot may repeat)");
      }
      need_typed(c, "coefficients", kI64);
      check(need(c, "coefficients").size() == m * static_cast<std::size_t>(k),
            "coefficient count must be k per segment");
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "spline.equiknotted";
    e.summary = "piecewise polynomial over equal intervals (last may be shorter)";
    e.param_schema = {{"degree", "polynomial degree per interval (default 1)"},
                      {"interval_length", "interval length (default 64)"},
                      {"type", "decoded type"},
                      {"index_type", "scalar type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      int k = coefficient_count(p);
      CircuitBuilder b;
      auto l = b.input("interval_length", type_at(t, "interval_length"));
      auto n = b.input("length", type_at(t, "length"));
      auto coeffs = b.input("coefficients", type_at(t, "coefficients"));
      auto [q, r] = div_mod_index(b, n, l);
      Wire v = piecewise_poly(b, q, b.cast(r, kI64), coeffs, k);
      b.output(kColumnLabel, b.cast(v, ptype(p, "type", kI64)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = int_input(in);
      int k = coefficient_count(p);
      ElementType it = ptype(p, "index_type", kU32);
      auto l = param_int_or(p, "interval_length", 64);
      require(l >= 1, Errc::invalid_argument, "interval_length must be positive");
      auto y = values_of(col);
      require_i64_values(y);
      std::vector<PolySegment> segs;
      for (std::size_t s = 0; s < y.size(); s += static_cast<std::size_t>(l)) {
        std::size_t e = std::min(y.size(), s + static_cast<std::size_t>(l));
        auto c = fit_i64(std::vector<i128>(y.begin() + s, y.begin() + e), k);
        if (!c) not_encodable("interval starting at " + std::to_string(s) + " has no integer polynomial fit");
        segs.push_back({s, e - s, *c});
      }
      return SchemeInstance{"",
                            json{{"degree", k - 1},
                                 {"interval_length", l},
                                 {"type", col.type().to_string()},
                                 {"index_type", it.to_string()}},
                            {{"interval_length", scalar_of(it, l, "interval_length")},
                             {"length", scalar_of(it, y.size(), "length")},
                             {"coefficients", coefficient_column(segs)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"interval_length", "length", "coefficients"});
      int k = coefficient_count(p);
      std::uint64_t l = need_scalar(c, "interval_length");
      std::uint64_t n = need_scalar(c, "length");
      check(l >= 1, "interval_length must be positive");
      need_typed(c, "coefficients", kI64);
      check(need(c, "coefficients").size() == (n + l - 1) / l * static_cast<std::uint64_t>(k),
            "coefficient count must be k per interval");
      return VerifyResult::accept();
    };
    // Degree 0 uses each interval's minimum, so residuals are non-negative.
    // Higher degrees use rounded least squares, falling back to the minimum
    // for intervals whose fit leaves the decoded type.
    e.approximate = [](const json& p, const Column& col) {
      require(col.type().is_integer(), Errc::type_mismatch, "an integer column is required");
      ElementType t = ptype(p, "type", col.type());
      int k = coefficient_count(p);
      ElementType it = ptype(p, "index_type", kU32);
      auto l = static_cast<std::size_t>(param_int_or(p, "interval_length", 64));
      require(l >= 1, Errc::invalid_argument, "interval_length must be positive");
      auto y = values_of(col);
      require_i64_values(y);
      auto basis = basis_of(json{{"degree", k - 1}});
      std::vector<PolySegment> segs;
      for (std::size_t s = 0; s < y.size(); s += l) {
        std::size_t e = std::min(y.size(), s + l);
        std::vector<i128> part(y.begin() + s, y.begin() + e);
        std::vector<i128> c(static_cast<std::size_t>(k), 0);
        bool fitted = false;
        if (k > 1) {
          c = rounded(least_squares(basis, part));
          auto got = generated_values(basis, c, part.size());
          fitted = got && std::all_of(got->begin(), got->end(), [&](i128 v) { return t.contains(v); });
        }
        if (!fitted) {
          std::fill(c.begin(), c.end(), 0);
          c[0] = *std::min_element(part.begin(), part.end());
        }
        segs.push_back({s, e - s, c});
      }
      return SchemeInstance{"spline.equiknotted",
                            json{{"degree", k - 1},
                                 {"interval_length", l},
                                 {"type", t.to_string()},
                                 {"index_type", it.to_string()}},
                            {{"interval_length", scalar_of(it, static_cast<i128>(l), "interval_length")},
                             {"length", scalar_of(it, static_cast<i128>(y.size()), "length")},
                             {"coefficients", coefficient_column(segs)}}};
    };
    register_range_checked(reg, std::move(e));
  }
}

// --------------------------------------------------------- frame of reference

ElementType work_type(const ElementType& t) { return t.is_signed() ? kI64 : kU64; }

void register_for(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "for";
  e.summary = "per-segment reference (minimum) plus narrow unsigned offsets";
  e.param_schema = {{"segment_length", "segment length (default 1024)"},
                    {"offset_type", "offset storage type (default: narrowest fitting)"},
                    {"type", "decoded type"},
                    {"index_type", "segment length scalar type (default u32)"}};
  e.build_decoder = [](const json& p, const TypeMap& t) {
    ElementType out = ptype(p, "type", type_at(t, "reference"));
    ElementType w = work_type(out);
    CircuitBuilder b;
    auto l = b.input("segment_length", type_at(t, "segment_length"));
    auto ref = b.input("reference", type_at(t, "reference"));
    auto off = b.input("offsets", type_at(t, "offsets"));
    auto [q, r] = div_mod_index(b, b.length(off), l);
    (void)r;
    Wire sum = b.ew("add", {b.cast(b.gather(q, ref), w), b.cast(off, w)});
    b.output(kColumnLabel, b.cast(sum, out));
    return b.build();
  };
  e.encode = [](const json& p, const ColumnFamily& in) {
    const Column& col = int_input(in);
    ElementType it = ptype(p, "index_type", kU32);
    auto l = param_int_or(p, "segment_length", 1024);
    require(l >= 1, Errc::invalid_argument, "segment_length must be positive");
    std::size_t ll = static_cast<std::size_t>(l);
    std::vector<i128> refs, offs;
    i128 top = 0;
    for (std::size_t s = 0; s < col.size(); s += ll) {
      std::size_t end = std::min(col.size(), s + ll);
      i128 lo = col.integer(s);
      for (std::size_t i = s; i < end; ++i) lo = std::min(lo, col.integer(i));
      refs.push_back(lo);
      for (std::size_t i = s; i < end; ++i) {
        offs.push_back(col.integer(i) - lo);
        top = std::max(top, offs.back());
      }
    }
    if (col.type().is_signed() && top > kI64Max) not_encodable("offset range exceeds the i64 working range");
    ElementType ot = ptype(p, "offset_type", narrowest_unsigned(static_cast<std::uint64_t>(top)));
    require(ot.is_unsigned(), Errc::invalid_argument, "offset_type must be unsigned");
    return SchemeInstance{"",
                          json{{"segment_length", l},
                               {"offset_type", ot.to_string()},
                               {"type", col.type().to_string()},
                               {"index_type", it.to_string()}},
                          {{"segment_length", scalar_of(it, l, "segment_length")},
                           {"reference", int_column(col.type(), refs, "reference")},
                           {"offsets", int_column(ot, offs, "offsets")}}};
  };
  e.verify = [](const json& p, const ColumnFamily& c) {
    expect_labels(c, {"segment_length", "reference", "offsets"});
    std::uint64_t l = need_scalar(c, "segment_length");
    check(l >= 1, "segment_length must be positive");
    const Column& ref = need(c, "reference");
    const Column& off = need(c, "offsets");
    check(ref.type().is_integer() && off.type().is_unsigned(), "reference must be integers, offsets unsigned");
    check(ref.type() == ptype(p, "type", ref.type()), "reference type differs from the decoded type");
    if (p.contains("offset_type")) check(off.type() == ptype(p, "offset_type", kU64), "offsets type differs from offset_type");
    check(ref.size() == (off.size() + l - 1) / l, "one reference per segment is required");
    return VerifyResult::accept();
  };
  register_range_checked(reg, std::move(e));
}

// ------------------------------------------------------------------ deltas

struct DeltaForm {
  std::vector<i128> bases, deltas;
};

DeltaForm deltas_of(const std::vector<i128>& y, std::size_t l) {
  DeltaForm f;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i % l == 0) {
      f.bases.push_back(y[i]);
      f.deltas.push_back(0);
    } else {
      f.deltas.push_back(y[i] - y[i - 1]);
    }
  }
  return f;
}

ElementType delta_type_for(const json& p, const std::vector<i128>& deltas) {
  if (p.contains("delta_type")) {
    ElementType t = ptype(p, "delta_type", kI64);
    require(t.is_integer(), Errc::invalid_argument, "delta_type must be an integer type");
    return t;
  }
  i128 lo = 0, hi = 0;
  for (auto d : deltas) lo = std::min(lo, d), hi = std::max(hi, d);
  return narrowest_signed(lo, hi);
}

// bases[seg] + sum of deltas from the segment start through i.
Wire integrate_segments(CircuitBuilder& b, const Wire& l, const Wire& bases, const Wire& d64) {
  auto [q, r] = div_mod_index(b, b.length(d64), l);
  (void)r;
  Wire inc = b.prefix(d64, "add", true, kI64);
  Wire exc = b.prefix(d64, "add", false, kI64);
  Wire first = b.ew("mul", {q, broadcast(b, b.cast(l, kU64), q)});
  Wire within = b.ew("sub", {inc, b.gather(first, exc)});
  return b.ew("add", {within, b.gather(q, b.cast(bases, kI64))});
}

void register_deltas(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "delta.naive";
    e.summary = "base value plus running sum of differences";
    e.param_schema = {{"delta_type", "difference storage type (default: narrowest fitting)"},
                      {"type", "decoded type"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      auto base = b.input("base", type_at(t, "base"));
      auto delta = b.input("delta", type_at(t, "delta"));
      Wire run = b.prefix(b.cast(delta, kI64), "add", true, kI64);
      Wire v = b.ew("add", {run, broadcast(b, b.cast(base, kI64), run)});
      b.output(kColumnLabel, b.cast(v, ptype(p, "type", type_at(t, "base"))));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = int_input(in);
      auto y = values_of(col);
      require_i64_values(y);
      DeltaForm f = deltas_of(y, std::max<std::size_t>(y.size(), 1));
      ElementType dt = delta_type_for(p, f.deltas);
      i128 base = y.empty() ? 0 : y[0];
      return SchemeInstance{"", json{{"delta_type", dt.to_string()}, {"type", col.type().to_string()}},
                            {{"base", scalar_of(col.type(), base, "base")},
                             {"delta", int_column(dt, f.deltas, "delta")}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"base", "delta"});
      check(need(c, "base").size() == 1, "base must be a scalar");
      check(need(c, "base").type().is_integer() && need(c, "delta").type().is_integer(),
            "base and delta must be integers");
      check(need(c, "base").type() == ptype(p, "type", need(c, "base").type()), "base type differs from the decoded type");
      return VerifyResult::accept();
    };
    register_range_checked(reg, std::move(e));
  }
  auto segmented_encode = [](const json& p, const Column& col, bool patched) {
    ElementType it = ptype(p, "index_type", kU32);
    auto l = param_int_or(p, "segment_length", 128);
    require(l >= 1, Errc::invalid_argument, "segment_length must be positive");
    auto y = values_of(col);
    require_i64_values(y);
    DeltaForm f = deltas_of(y, static_cast<std::size_t>(l));
    ElementType dt = patched ? ptype(p, "delta_type", ElementType::i(8)) : delta_type_for(p, f.deltas);
    json params{{"segment_length", l},
                {"delta_type", dt.to_string()},
                {"type", col.type().to_string()},
                {"index_type", it.to_string()}};
    SchemeInstance inst{"", params,
                        {{"segment_length", scalar_of(it, l, "segment_length")},
                         {"bases", int_column(col.type(), f.bases, "bases")}}};
    if (patched) {
      std::vector<std::uint64_t> pos;
      std::vector<i128> data;
      for (std::size_t i = 0; i < f.deltas.size(); ++i) {
        if (!dt.contains(f.deltas[i])) {
          pos.push_back(i);
          data.push_back(f.deltas[i]);
          f.deltas[i] = 0;
        }
      }
      inst.columns["patch_pos"] = index_column(it, pos, "patch_pos");
      inst.columns["patch_data"] = int_column(kI64, data, "patch_data");
    }
    inst.columns["delta"] = int_column(dt, f.deltas, "delta");
    return inst;
  };
  auto segmented_verify = [](const json& p, const ColumnFamily& c, bool patched) {
    if (patched) {
      expect_labels(c, {"segment_length", "bases", "delta", "patch_pos", "patch_data"});
    } else {
      expect_labels(c, {"segment_length", "bases", "delta"});
    }
    std::uint64_t l = need_scalar(c, "segment_length");
    check(l >= 1, "segment_length must be positive");
    const Column& bases = need(c, "bases");
    const Column& delta = need(c, "delta");
    check(bases.type().is_integer() && delta.type().is_integer(), "bases and delta must be integers");
    check(bases.type() == ptype(p, "type", bases.type()), "bases type differs from the decoded type");
    check(bases.size() == (delta.size() + l - 1) / l, "one base per segment is required");
    if (patched) {
      const Column& pos = need(c, "patch_pos");
      need_typed(c, "patch_data", kI64);
      check(pos.size() == need(c, "patch_data").size(), "patch_pos and patch_data differ in count");
      check(pos.type().is_integer() && distinct_below(pos, delta.size()),
            "patch positions must be distinct and inside the delta column");
    }
    return VerifyResult::accept();
  };
  for (bool patched : {false, true}) {
    CodecEntry e;
    e.scheme_id = patched ? "delta.patched" : "delta";
    e.summary = patched ? "segmented deltas with out-of-range differences patched before integration"
                        : "differences chained within segments, each with its own base";
    e.param_schema = {{"segment_length", "segment length (default 128)"},
                      {"delta_type", patched ? "difference storage type (default i8)"
                                             : "difference storage type (default: narrowest fitting)"},
                      {"type", "decoded type"},
                      {"index_type", "position and scalar type (default u32)"}};
    e.build_decoder = [patched](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      auto l = b.input("segment_length", type_at(t, "segment_length"));
      auto bases = b.input("bases", type_at(t, "bases"));
      Wire d64 = b.cast(b.input("delta", type_at(t, "delta")), kI64);
      if (patched) {
        auto pos = b.input("patch_pos", type_at(t, "patch_pos"));
        auto data = b.input("patch_data", type_at(t, "patch_data"));
        d64 = b.scatter(d64, pos, data);
      }
      Wire v = integrate_segments(b, l, bases, d64);
      b.output(kColumnLabel, b.cast(v, ptype(p, "type", type_at(t, "bases"))));
      return b.build();
    };
    e.encode = [patched, segmented_encode](const json& p, const ColumnFamily& in) {
      return segmented_encode(p, int_input(in), patched);
    };
    e.verify = [patched, segmented_verify](const json& p, const ColumnFamily& c) {
      return segmented_verify(p, c, patched);
    };
    register_range_checked(reg, std::move(e));
  }
}

// ------------------------------------------------ periodically variable width

void register_pvw(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "pvw";
  e.summary = "variable-width elements where each group of `period` elements shares one width";
  e.param_schema = {{"period", "elements per width group"}, {"length_type", "decoded length type (default u32)"}};
  e.build_decoder = [](const json& p, const TypeMap& t) {
    auto period = param_int(p, "period");
    CircuitBuilder b;
    auto widths = b.input("group_width", type_at(t, "group_width"));
    auto n = b.input("element_count", type_at(t, "element_count"));
    auto values = b.input("values", type_at(t, "values"));
    Wire group = b.ew_const("div", b.iota(n), period);
    b.output("length", b.cast(b.gather(group, widths), ptype(p, "length_type", kU32)));
    b.output("data", values);
    return b.build();
  };
  e.encode = [](const json& p, const ColumnFamily& in) {
    const Column& len = need(in, "length");
    const Column& data = need(in, "data");
    require(in.size() == 2 && len.type().is_integer() && total_of(len) == data.size(), Errc::invalid_argument,
            "expected a variable-width family {length, data}");
    auto period = param_int(p, "period");
    require(period >= 1, Errc::invalid_argument, "period must be positive");
    std::vector<std::uint64_t> widths;
    for (std::size_t g = 0; g * period < len.size(); ++g) {
      std::size_t s = g * static_cast<std::size_t>(period);
      std::size_t end = std::min(len.size(), s + static_cast<std::size_t>(period));
      for (std::size_t i = s; i < end; ++i) {
        if (len.u64(i) != len.u64(s)) {
          not_encodable("element " + std::to_string(i) + " differs in width from its group");
        }
      }
      widths.push_back(len.u64(s));
    }
    return SchemeInstance{"", json{{"period", period}, {"length_type", len.type().to_string()}},
                          {{"group_width", index_column(len.type(), widths, "group_width")},
                           {"element_count", scalar_of(kU32, len.size(), "element_count")},
                           {"values", data}}};
  };
  e.verify = [](const json& p, const ColumnFamily& c) {
    expect_labels(c, {"group_width", "element_count", "values"});
    auto period = param_int(p, "period");
    check(period >= 1, "period must be positive");
    std::uint64_t n = need_scalar(c, "element_count");
    const Column& w = need(c, "group_width");
    expect_index_type(w, "group_width");
    std::uint64_t per = static_cast<std::uint64_t>(period);
    check(w.size() == (n + per - 1) / per, "one width per group is required");
    std::uint64_t used = 0;
    for (std::size_t g = 0; g < w.size(); ++g) {
      std::uint64_t members = std::min(per, n - g * per);
      used += members * w.u64(g);
    }
    check(used == need(c, "values").size(), "widths consume " + std::to_string(used) + " of " +
                                                std::to_string(need(c, "values").size()) + " data elements");
    return VerifyResult::accept();
  };
  register_range_checked(reg, std::move(e));
}

}  // namespace

void register_numeric_schemes(CodecRegistry& reg) {
  register_constant(reg);
  register_generated(reg);
  register_nullsup(reg);
  register_runs(reg);
  register_splines(reg);
  register_for(reg);
  register_deltas(reg);
  register_pvw(reg);
}

}  // namespace colcirc::detail
