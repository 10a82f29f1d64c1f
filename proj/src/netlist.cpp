#include "lgn/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <deque>

#include "lgn/common.hpp"

namespace lgn {

namespace {

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string input_name(uint64_t i) { return "x_" + std::to_string(i); }

std::string neuron_name(size_t layer, uint64_t i) {
  return "n_" + std::to_string(layer) + "_" + std::to_string(i);
}

// Boolean expression for one of the 16 two-input gate functions. The truth
// bit of gate `op` on inputs (a, b) is (op >> (3 - (2a + b))) & 1.
std::string gate_expr(int op, const std::string& a, const std::string& b) {
  switch (op) {
    case 0: return "1'b0";
    case 1: return a + " & " + b;
    case 2: return a + " & ~" + b;
    case 3: return a;
    case 4: return "~" + a + " & " + b;
    case 5: return b;
    case 6: return a + " ^ " + b;
    case 7: return a + " | " + b;
    case 8: return "~(" + a + " | " + b + ")";
    case 9: return "~(" + a + " ^ " + b + ")";
    case 10: return "~" + b;
    case 11: return a + " | ~" + b;
    case 12: return "~" + a;
    case 13: return "~" + a + " | " + b;
    case 14: return "~(" + a + " & " + b + ")";
    case 15: return "1'b1";
    default: throw ArgumentError("emit_netlist: gate id out of range");
  }
}

std::string hex_literal(uint64_t width_bits, uint64_t value) {
  char buf[32];
  int digits = int((width_bits + 3) / 4);
  std::snprintf(buf, sizeof buf, "%0*llx", digits,
                static_cast<unsigned long long>(value));
  return std::to_string(width_bits) + "'h" + buf;
}

// Sum-of-minterms expression for a LUT truth table. Index bit order matches
// the hard-evaluation convention: input j carries weight 2^(fanin-1-j).
std::string lut_minterms(const uint8_t* truth, int fanin,
                         const std::vector<std::string>& in) {
  size_t e = size_t(1) << fanin;
  size_t ones = 0;
  for (size_t k = 0; k < e; ++k) ones += truth[k];
  if (ones == 0) return "1'b0";
  if (ones == e) return "1'b1";
  std::string s;
  for (size_t k = 0; k < e; ++k) {
    if (!truth[k]) continue;
    if (!s.empty()) s += " | ";
    s += "(";
    for (int j = 0; j < fanin; ++j) {
      if (j > 0) s += " & ";
      if (((k >> (fanin - 1 - j)) & 1) == 0) s += "~";
      s += in[size_t(j)];
    }
    s += ")";
  }
  return s;
}

// LUT primitive instance. Connecting I_m to input L_(fanin-1-m) makes the
// primitive address {I_(fanin-1) ... I_0} equal the hard-evaluation index,
// so INIT bit k is exactly truth-table entry k.
void emit_lut_primitive(std::string& s, const std::string& net, int fanin,
                        const uint8_t* truth,
                        const std::vector<std::string>& in) {
  uint64_t init = 0;
  size_t e = size_t(1) << fanin;
  for (size_t k = 0; k < e; ++k) init |= uint64_t(truth[k]) << k;
  s += "    wire " + net + ";\n";
  s += "    LUT" + std::to_string(fanin) + " #(.INIT(" +
       hex_literal(uint64_t(e), init) + ")) " + net + "_lut (";
  for (int m = 0; m < fanin; ++m)
    s += ".I" + std::to_string(m) + "(" + in[size_t(fanin - 1 - m)] + "), ";
  s += ".O(" + net + "));\n";
}

}  // namespace

std::string emit_netlist(const HardNetwork& net, NetlistStyle style) {
  const NetworkConfig& cfg = net.config;
  if (net.layers.empty()) throw ArgumentError("emit_netlist: empty network");

  bool prims = false;
  if (style == NetlistStyle::kLutPrimitive) {
    if (cfg.is_lut && cfg.lut_fanin > 6)
      throw ArgumentError(
          "emit_netlist: LUT primitives support fanin <= 6; use assign style");
    prims = true;
  } else if (style == NetlistStyle::kAuto) {
    prims = cfg.is_lut && cfg.lut_fanin <= 6;
  }

  size_t classes = size_t(cfg.num_classes);
  size_t group = size_t(cfg.group_size());
  size_t idx_bits = 1;
  while ((size_t(1) << idx_bits) < classes) ++idx_bits;

  std::string s;
  s.reserve(size_t(1) << 16);
  s += "module lgn_net(\n";
  for (uint64_t i = 0; i < cfg.input_width; ++i)
    s += "    input wire " + input_name(i) + ",\n";
  for (size_t b = 0; b < idx_bits; ++b) {
    s += "    output wire y_" + std::to_string(b);
    s += (b + 1 < idx_bits) ? ",\n" : "\n";
  }
  s += ");\n";

  for (size_t l = 0; l < net.layers.size(); ++l) {
    const HardLayer& ly = net.layers[l];
    s += "\n    // layer " + std::to_string(l) + "\n";
    auto prev_name = [&](uint32_t w) {
      return l == 0 ? input_name(w) : neuron_name(l - 1, w);
    };
    if (!cfg.is_lut) {
      for (uint64_t g = 0; g < ly.width; ++g) {
        std::string nm = neuron_name(l, g);
        std::string a = prev_name(ly.wires[size_t(2 * g)]);
        std::string b = prev_name(ly.wires[size_t(2 * g + 1)]);
        int op = ly.choice[size_t(g)];
        if (prims) {
          // Gate as a 2-input LUT: truth bit at address k is the gate's
          // value on corner k, where a is the high address bit.
          uint8_t truth[4];
          for (int k = 0; k < 4; ++k) truth[k] = uint8_t((op >> (3 - k)) & 1);
          emit_lut_primitive(s, nm, 2, truth, {a, b});
        } else {
          s += "    wire " + nm + " = " + gate_expr(op, a, b) + ";\n";
        }
      }
    } else {
      int fanin = ly.fanin;
      size_t e = size_t(1) << fanin;
      std::vector<std::string> in(static_cast<size_t>(fanin));
      for (uint64_t n = 0; n < ly.width; ++n) {
        std::string nm = neuron_name(l, n);
        for (int j = 0; j < fanin; ++j)
          in[size_t(j)] = prev_name(ly.wires[size_t(n) * size_t(fanin) + size_t(j)]);
        const uint8_t* truth = ly.choice.data() + size_t(n) * e;
        if (prims && fanin <= 6)
          emit_lut_primitive(s, nm, fanin, truth, in);
        else
          s += "    wire " + nm + " = " + lut_minterms(truth, fanin, in) + ";\n";
      }
    }
  }

  // Per-class popcount via full/half-adder column compression, in the same
  // order as the cost model: reduce each weight column front-to-back, then
  // append the carries to the next column.
  size_t last = net.layers.size() - 1;
  std::vector<std::vector<std::string>> count_bits(classes);
  for (size_t c = 0; c < classes; ++c) {
    s += "\n    // class " + std::to_string(c) + " popcount\n";
    std::vector<std::deque<std::string>> cols(1);
    for (size_t i = 0; i < group; ++i)
      cols[0].push_back(neuron_name(last, uint64_t(c * group + i)));
    size_t t = 0;
    auto fresh = [&]() {
      return "pc" + std::to_string(c) + "_" + std::to_string(t++);
    };
    for (size_t w = 0; w < cols.size(); ++w) {
      std::vector<std::string> carries;
      while (cols[w].size() >= 3) {
        std::string a = cols[w].front(); cols[w].pop_front();
        std::string b = cols[w].front(); cols[w].pop_front();
        std::string d = cols[w].front(); cols[w].pop_front();
        std::string sum = fresh(), carry = fresh();
        s += "    wire " + sum + " = " + a + " ^ " + b + " ^ " + d + ";\n";
        s += "    wire " + carry + " = (" + a + " & " + b + ") | (" + a +
             " & " + d + ") | (" + b + " & " + d + ");\n";
        cols[w].push_back(sum);
        carries.push_back(carry);
      }
      if (cols[w].size() == 2) {
        std::string a = cols[w].front(); cols[w].pop_front();
        std::string b = cols[w].front(); cols[w].pop_front();
        std::string sum = fresh(), carry = fresh();
        s += "    wire " + sum + " = " + a + " ^ " + b + ";\n";
        s += "    wire " + carry + " = " + a + " & " + b + ";\n";
        cols[w].push_back(sum);
        carries.push_back(carry);
      }
      if (!carries.empty()) {
        if (w + 1 == cols.size()) cols.emplace_back();
        for (const std::string& nm : carries) cols[w + 1].push_back(nm);
      }
    }
    for (const auto& col : cols) {
      if (col.size() != 1)
        throw NumericError("emit_netlist: popcount column not fully reduced");
      count_bits[c].push_back(col.front());
    }
  }

  // Running argmax: keep the best (count, index) pair seen so far and replace
  // it only on a strictly greater count, so ties keep the lowest class index.
  s += "\n    // argmax readout\n";
  size_t width_bits = count_bits[0].size();
  std::vector<std::string> bv = count_bits[0];
  std::vector<std::string> bi(idx_bits);
  for (size_t b = 0; b < idx_bits; ++b) {
    bi[b] = "bi0_" + std::to_string(b);
    s += "    wire " + bi[b] + " = 1'b0;\n";
  }
  for (size_t k = 1; k < classes; ++k) {
    const std::vector<std::string>& a = count_bits[k];
    std::string K = std::to_string(k);
    // Most-significant-bit-first comparison: gt_b answers "a > best" over
    // bits [b, top]; eq_b answers "equal so far".
    std::string gt, eq;
    for (size_t b = width_bits; b-- > 0;) {
      std::string sb = std::to_string(b);
      std::string gn = "gt" + K + "_" + sb;
      if (b + 1 == width_bits)
        s += "    wire " + gn + " = " + a[b] + " & ~" + bv[b] + ";\n";
      else
        s += "    wire " + gn + " = " + gt + " | (" + eq + " & " + a[b] +
             " & ~" + bv[b] + ");\n";
      gt = gn;
      if (b > 0) {
        std::string en = "eq" + K + "_" + sb;
        if (b + 1 == width_bits)
          s += "    wire " + en + " = ~(" + a[b] + " ^ " + bv[b] + ");\n";
        else
          s += "    wire " + en + " = " + eq + " & ~(" + a[b] + " ^ " + bv[b] +
               ");\n";
        eq = en;
      }
    }
    std::vector<std::string> nbv(width_bits), nbi(idx_bits);
    for (size_t b = 0; b < width_bits; ++b) {
      nbv[b] = "bv" + K + "_" + std::to_string(b);
      s += "    wire " + nbv[b] + " = (" + gt + " & " + a[b] + ") | (~" + gt +
           " & " + bv[b] + ");\n";
    }
    for (size_t b = 0; b < idx_bits; ++b) {
      nbi[b] = "bi" + K + "_" + std::to_string(b);
      if ((k >> b) & 1)
        s += "    wire " + nbi[b] + " = " + gt + " | " + bi[b] + ";\n";
      else
        s += "    wire " + nbi[b] + " = ~" + gt + " & " + bi[b] + ";\n";
    }
    bv.swap(nbv);
    bi.swap(nbi);
  }
  for (size_t b = 0; b < idx_bits; ++b)
    s += "    assign y_" + std::to_string(b) + " = " + bi[b] + ";\n";
  s += "endmodule\n";
  return s;
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

namespace {

struct Tok {
  enum Kind : uint8_t { kIdent, kNumber, kBased, kPunct, kEnd } kind = kEnd;
  std::string text;       // identifier or plain number digits
  char punct = 0;         // kPunct
  uint64_t width = 0;     // kBased: declared bit width
  char base = 0;          // kBased: 'b' or 'h'
  std::string digits;     // kBased: digit characters
  size_t line = 0;
};

[[noreturn]] void fail(size_t line, const std::string& msg) {
  throw ParseError("netlist line " + std::to_string(line) + ": " + msg);
}

std::vector<Tok> lex(const std::string& text) {
  std::vector<Tok> toks;
  size_t i = 0, n = text.size(), line = 1;
  while (i < n) {
    char ch = text[i];
    if (ch == '\n') { ++line; ++i; continue; }
    if (ch == ' ' || ch == '\t' || ch == '\r') { ++i; continue; }
    if (ch == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                       text[j] == '_'))
        ++j;
      Tok t;
      t.kind = Tok::kIdent;
      t.text = text.substr(i, j - i);
      t.line = line;
      toks.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Tok t;
      t.line = line;
      if (j < n && text[j] == '\'') {
        if (j + 1 >= n) fail(line, "unterminated based literal");
        char base = char(std::tolower(static_cast<unsigned char>(text[j + 1])));
        if (base != 'b' && base != 'h')
          fail(line, std::string("unsupported literal base '") + text[j + 1] +
                         "'");
        t.kind = Tok::kBased;
        t.base = base;
        t.width = std::strtoull(text.substr(i, j - i).c_str(), nullptr, 10);
        size_t k = j + 2;
        while (k < n && (std::isxdigit(static_cast<unsigned char>(text[k])) ||
                         text[k] == '_')) {
          if (text[k] != '_') t.digits += text[k];
          ++k;
        }
        if (t.digits.empty()) fail(line, "based literal has no digits");
        if (t.width == 0) fail(line, "based literal has zero width");
        i = k;
      } else {
        t.kind = Tok::kNumber;
        t.text = text.substr(i, j - i);
        i = j;
      }
      toks.push_back(std::move(t));
      continue;
    }
    if (std::strchr("(),;=&|^~#.", ch) != nullptr) {
      Tok t;
      t.kind = Tok::kPunct;
      t.punct = ch;
      t.line = line;
      toks.push_back(std::move(t));
      ++i;
      continue;
    }
    fail(line, std::string("unexpected character '") + ch + "'");
  }
  Tok end;
  end.kind = Tok::kEnd;
  end.line = line;
  toks.push_back(std::move(end));
  return toks;
}

uint64_t decode_based(const Tok& t) {
  uint64_t val = 0;
  int shift = (t.base == 'h') ? 4 : 1;
  for (char c : t.digits) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else d = 10 + (std::tolower(static_cast<unsigned char>(c)) - 'a');
    if (d >= (1 << shift))
      fail(t.line, "digit out of range for literal base");
    if ((val >> (64 - shift)) != 0) fail(t.line, "literal value too wide");
    val = (val << shift) | uint64_t(d);
  }
  if (t.width < 64 && (val >> t.width) != 0)
    fail(t.line, "literal value exceeds its declared width");
  return val;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Netlist run() {
    expect_keyword("module");
    expect_ident();  // module name, unused
    expect_punct('(');
    parse_ports();
    expect_punct(')');
    expect_punct(';');
    while (!at_keyword("endmodule")) parse_statement();
    ++pos_;  // consume endmodule
    if (peek().kind != Tok::kEnd)
      fail(peek().line, "content after endmodule");
    for (uint32_t id : nl_.outputs)
      if (!defined_[id])
        fail(peek().line, "output " + nl_.net_names[id] + " never assigned");
    return std::move(nl_);
  }

 private:
  const Tok& peek() const { return toks_[pos_]; }

  const Tok& take() { return toks_[pos_++]; }

  bool at_keyword(const char* kw) const {
    return peek().kind == Tok::kIdent && peek().text == kw;
  }

  void expect_keyword(const char* kw) {
    if (!at_keyword(kw))
      fail(peek().line, std::string("expected '") + kw + "'");
    ++pos_;
  }

  std::string expect_ident() {
    if (peek().kind != Tok::kIdent) fail(peek().line, "expected identifier");
    return take().text;
  }

  void expect_punct(char c) {
    if (peek().kind != Tok::kPunct || peek().punct != c)
      fail(peek().line, std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept_punct(char c) {
    if (peek().kind == Tok::kPunct && peek().punct == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  uint32_t declare(const std::string& name, size_t line) {
    if (nl_.net_ids.count(name)) fail(line, "duplicate net " + name);
    uint32_t id = uint32_t(nl_.net_names.size());
    nl_.net_ids.emplace(name, id);
    nl_.net_names.push_back(name);
    defined_.push_back(0);
    return id;
  }

  uint32_t lookup_defined(const std::string& name, size_t line) {
    auto it = nl_.net_ids.find(name);
    if (it == nl_.net_ids.end()) fail(line, "unknown net " + name);
    if (!defined_[it->second])
      fail(line, "net " + name + " used before it is assigned");
    return it->second;
  }

  void define(uint32_t id, size_t line) {
    if (defined_[id])
      fail(line, "net " + nl_.net_names[id] + " assigned twice");
    defined_[id] = 1;
  }

  void parse_ports() {
    do {
      size_t line = peek().line;
      std::string dir = expect_ident();
      if (dir != "input" && dir != "output")
        fail(line, "expected 'input' or 'output'");
      if (at_keyword("wire")) ++pos_;
      std::string name = expect_ident();
      uint32_t id = declare(name, line);
      if (dir == "input") {
        defined_[id] = 1;
        nl_.inputs.push_back(id);
      } else {
        nl_.outputs.push_back(id);
      }
    } while (accept_punct(','));
  }

  void parse_statement() {
    const Tok& t = peek();
    if (t.kind != Tok::kIdent) fail(t.line, "expected statement");
    if (t.text == "wire") {
      ++pos_;
      size_t line = peek().line;
      std::string name = expect_ident();
      uint32_t id = declare(name, line);
      if (accept_punct('=')) {
        NetStatement st;
        st.kind = NetStatement::kAssign;
        st.target = id;
        st.expr = parse_expr();
        define(id, line);
        nl_.statements.push_back(std::move(st));
      }
      expect_punct(';');
      return;
    }
    if (t.text == "assign") {
      ++pos_;
      size_t line = peek().line;
      std::string name = expect_ident();
      auto it = nl_.net_ids.find(name);
      if (it == nl_.net_ids.end()) fail(line, "assign to undeclared net " + name);
      expect_punct('=');
      NetStatement st;
      st.kind = NetStatement::kAssign;
      st.target = it->second;
      st.expr = parse_expr();
      define(it->second, line);
      expect_punct(';');
      nl_.statements.push_back(std::move(st));
      return;
    }
    if (t.text.rfind("LUT", 0) == 0) {
      parse_lut_instance();
      return;
    }
    fail(t.line, "unexpected token '" + t.text + "'");
  }

  void parse_lut_instance() {
    const Tok& head = take();
    size_t line = head.line;
    int fanin = 0;
    const std::string& suffix = head.text;
    if (suffix.size() <= 3) fail(line, "LUT primitive without a size");
    for (size_t i = 3; i < suffix.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(suffix[i])))
        fail(line, "malformed LUT primitive name " + suffix);
      fanin = fanin * 10 + (suffix[i] - '0');
      if (fanin > 6) fail(line, "LUT primitive fanin above 6");
    }
    if (fanin < 1) fail(line, "LUT primitive fanin below 1");
    expect_punct('#');
    expect_punct('(');
    expect_punct('.');
    if (expect_ident() != "INIT") fail(line, "expected .INIT parameter");
    expect_punct('(');
    if (peek().kind != Tok::kBased) fail(peek().line, "expected INIT literal");
    Tok lit = take();
    size_t entries = size_t(1) << fanin;
    if (lit.width != entries)
      fail(lit.line, "INIT width " + std::to_string(lit.width) +
                         " does not match LUT" + std::to_string(fanin));
    uint64_t init = decode_based(lit);
    expect_punct(')');
    expect_punct(')');
    expect_ident();  // instance name, unused
    expect_punct('(');
    NetStatement st;
    st.kind = NetStatement::kLut;
    st.init.assign(entries, 0);
    for (size_t k = 0; k < entries; ++k) st.init[k] = uint8_t((init >> k) & 1);
    st.lut_inputs.assign(size_t(fanin), 0);
    std::vector<uint8_t> seen(size_t(fanin), 0);
    bool have_output = false;
    do {
      expect_punct('.');
      size_t pline = peek().line;
      std::string port = expect_ident();
      expect_punct('(');
      std::string net = expect_ident();
      expect_punct(')');
      if (port == "O") {
        if (have_output) fail(pline, "duplicate .O connection");
        auto it = nl_.net_ids.find(net);
        if (it == nl_.net_ids.end())
          fail(pline, "LUT output connects to undeclared net " + net);
        define(it->second, pline);
        st.target = it->second;
        have_output = true;
      } else if (port.size() >= 2 && port[0] == 'I') {
        int m = 0;
        for (size_t i = 1; i < port.size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(port[i])))
            fail(pline, "unknown LUT port " + port);
          m = m * 10 + (port[i] - '0');
        }
        if (m >= fanin) fail(pline, "LUT port " + port + " out of range");
        if (seen[size_t(m)]) fail(pline, "duplicate connection to " + port);
        seen[size_t(m)] = 1;
        st.lut_inputs[size_t(m)] = lookup_defined(net, pline);
      } else {
        fail(pline, "unknown LUT port " + port);
      }
    } while (accept_punct(','));
    expect_punct(')');
    expect_punct(';');
    if (!have_output) fail(line, "LUT instance without .O connection");
    for (int m = 0; m < fanin; ++m) {
      if (!seen[size_t(m)])
        fail(line, "LUT instance missing .I" + std::to_string(m));
      if (st.lut_inputs[size_t(m)] == st.target)
        fail(line, "LUT input connected to its own output");
    }
    nl_.statements.push_back(std::move(st));
  }

  // expr := and-terms combined by '^' then '|' (precedence & > ^ > |).
  int32_t parse_expr() { return parse_or(); }

  int32_t push(NetExpr e) {
    nl_.arena.push_back(e);
    return int32_t(nl_.arena.size() - 1);
  }

  int32_t parse_or() {
    int32_t a = parse_xor();
    while (peek().kind == Tok::kPunct && peek().punct == '|') {
      ++pos_;
      int32_t b = parse_xor();
      NetExpr e;
      e.kind = NetExpr::kOr;
      e.a = a;
      e.b = b;
      a = push(e);
    }
    return a;
  }

  int32_t parse_xor() {
    int32_t a = parse_and();
    while (peek().kind == Tok::kPunct && peek().punct == '^') {
      ++pos_;
      int32_t b = parse_and();
      NetExpr e;
      e.kind = NetExpr::kXor;
      e.a = a;
      e.b = b;
      a = push(e);
    }
    return a;
  }

  int32_t parse_and() {
    int32_t a = parse_unary();
    while (peek().kind == Tok::kPunct && peek().punct == '&') {
      ++pos_;
      int32_t b = parse_unary();
      NetExpr e;
      e.kind = NetExpr::kAnd;
      e.a = a;
      e.b = b;
      a = push(e);
    }
    return a;
  }

  int32_t parse_unary() {
    if (accept_punct('~')) {
      int32_t a = parse_unary();
      NetExpr e;
      e.kind = NetExpr::kNot;
      e.a = a;
      return push(e);
    }
    return parse_primary();
  }

  int32_t parse_primary() {
    const Tok& t = peek();
    if (t.kind == Tok::kPunct && t.punct == '(') {
      ++pos_;
      int32_t a = parse_expr();
      expect_punct(')');
      return a;
    }
    if (t.kind == Tok::kBased) {
      Tok lit = take();
      if (lit.width != 1)
        fail(lit.line, "only 1-bit literals are allowed in expressions");
      NetExpr e;
      e.kind = NetExpr::kConst;
      e.value = uint8_t(decode_based(lit) & 1);
      return push(e);
    }
    if (t.kind == Tok::kIdent) {
      size_t line = t.line;
      std::string name = take().text;
      NetExpr e;
      e.kind = NetExpr::kVar;
      e.var = lookup_defined(name, line);
      return push(e);
    }
    fail(t.line, "expected expression");
  }

  std::vector<Tok> toks_;
  size_t pos_ = 0;
  Netlist nl_;
  std::vector<uint8_t> defined_;
};

}  // namespace

Netlist parse_netlist(const std::string& text) { return Parser(text).run(); }

std::vector<uint8_t> eval_netlist(const Netlist& nl,
                                  const std::vector<uint8_t>& input_bits) {
  if (input_bits.size() != nl.inputs.size())
    throw ArgumentError("eval_netlist: got " +
                        std::to_string(input_bits.size()) + " inputs, need " +
                        std::to_string(nl.inputs.size()));
  for (size_t i = 0; i < input_bits.size(); ++i)
    if (input_bits[i] > 1)
      throw ArgumentError("eval_netlist: non-binary input at index " +
                          std::to_string(i));
  std::vector<uint8_t> val(nl.net_names.size(), 0);
  for (size_t i = 0; i < nl.inputs.size(); ++i)
    val[nl.inputs[i]] = input_bits[i];
  // Arena nodes were appended in evaluation order (children before parents,
  // statements in file order), so one forward sweep per statement suffices.
  std::vector<uint8_t> av(nl.arena.size(), 0);
  size_t cursor = 0;
  for (const NetStatement& st : nl.statements) {
    if (st.kind == NetStatement::kAssign) {
      for (size_t i = cursor; i <= size_t(st.expr); ++i) {
        const NetExpr& e = nl.arena[i];
        switch (e.kind) {
          case NetExpr::kConst: av[i] = e.value; break;
          case NetExpr::kVar: av[i] = val[e.var]; break;
          case NetExpr::kNot: av[i] = uint8_t(av[size_t(e.a)] ^ 1); break;
          case NetExpr::kAnd:
            av[i] = uint8_t(av[size_t(e.a)] & av[size_t(e.b)]);
            break;
          case NetExpr::kOr:
            av[i] = uint8_t(av[size_t(e.a)] | av[size_t(e.b)]);
            break;
          case NetExpr::kXor:
            av[i] = uint8_t(av[size_t(e.a)] ^ av[size_t(e.b)]);
            break;
        }
      }
      cursor = size_t(st.expr) + 1;
      val[st.target] = av[size_t(st.expr)];
    } else {
      size_t addr = 0;
      for (size_t m = 0; m < st.lut_inputs.size(); ++m)
        addr |= size_t(val[st.lut_inputs[m]]) << m;
      val[st.target] = st.init[addr];
    }
  }
  std::vector<uint8_t> out(nl.outputs.size());
  for (size_t i = 0; i < nl.outputs.size(); ++i) out[i] = val[nl.outputs[i]];
  return out;
}

int netlist_class(const std::vector<uint8_t>& output_bits) {
  int c = 0;
  for (size_t i = 0; i < output_bits.size(); ++i)
    c |= int(output_bits[i] & 1) << i;
  return c;
}

}  // namespace lgn
