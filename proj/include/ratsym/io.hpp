#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratsym/errors.hpp"
#include "ratsym/insertion.hpp"
#include "ratsym/measure.hpp"

namespace ratsym {

using json = nlohmann::json;

/// Tiny expression evaluator for grid weight rules: +,-,*,/,^, parentheses,
/// exp/log/sqrt/sin/cos, literals, i, and the grid variables x, y.
class WeightExpr {
public:
    explicit WeightExpr(std::string src) : src_(std::move(src)) {
        pos_ = 0;
        root_ = parse_sum();
        skip_ws();
        if (pos_ != src_.size())
            throw parse_error("weight expression: trailing input at '" + src_.substr(pos_) + "'");
    }

    cx operator()(cx x, cx y) const { return eval(root_, x, y); }

private:
    struct Node {
        char op = 0;          // '+','-','*','/','^','n','x','y','f','u'
        cx value{};           // for 'n'
        std::string fn;       // for 'f'
        std::unique_ptr<Node> a, b;
    };
    using NodePtr = std::unique_ptr<Node>;

    static cx eval(const NodePtr& n, cx x, cx y) {
        switch (n->op) {
            case 'n': return n->value;
            case 'x': return x;
            case 'y': return y;
            case 'u': return -eval(n->a, x, y);
            case '+': return eval(n->a, x, y) + eval(n->b, x, y);
            case '-': return eval(n->a, x, y) - eval(n->b, x, y);
            case '*': return eval(n->a, x, y) * eval(n->b, x, y);
            case '/': return eval(n->a, x, y) / eval(n->b, x, y);
            case '^': return std::pow(eval(n->a, x, y), eval(n->b, x, y));
            case 'f': {
                cx v = eval(n->a, x, y);
                if (n->fn == "exp") return std::exp(v);
                if (n->fn == "log") return std::log(v);
                if (n->fn == "sqrt") return std::sqrt(v);
                if (n->fn == "sin") return std::sin(v);
                if (n->fn == "cos") return std::cos(v);
                throw parse_error("weight expression: unknown function " + n->fn);
            }
        }
        throw parse_error("weight expression: bad node");
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr a = parse_product();
        for (;;) {
            if (eat('+')) {
                NodePtr n = std::make_unique<Node>();
                n->op = '+'; n->a = std::move(a); n->b = parse_product();
                a = std::move(n);
            } else if (eat('-')) {
                NodePtr n = std::make_unique<Node>();
                n->op = '-'; n->a = std::move(a); n->b = parse_product();
                a = std::move(n);
            } else return a;
        }
    }
    NodePtr parse_product() {
        NodePtr a = parse_unary();
        for (;;) {
            if (eat('*')) {
                NodePtr n = std::make_unique<Node>();
                n->op = '*'; n->a = std::move(a); n->b = parse_unary();
                a = std::move(n);
            } else if (eat('/')) {
                NodePtr n = std::make_unique<Node>();
                n->op = '/'; n->a = std::move(a); n->b = parse_unary();
                a = std::move(n);
            } else return a;
        }
    }
    NodePtr parse_unary() {
        if (eat('-')) {
            NodePtr n = std::make_unique<Node>();
            n->op = 'u'; n->a = parse_unary();
            return n;
        }
        if (eat('+')) return parse_unary();
        return parse_power();
    }
    NodePtr parse_power() {
        NodePtr a = parse_atom();
        if (eat('^')) {
            NodePtr n = std::make_unique<Node>();
            n->op = '^'; n->a = std::move(a); n->b = parse_unary();  // right associative
            return n;
        }
        return a;
    }
    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw parse_error("weight expression: unexpected end");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = parse_sum();
            if (!eat(')')) throw parse_error("weight expression: missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const double v = std::stod(src_.substr(pos_), &used);
            pos_ += used;
            NodePtr n = std::make_unique<Node>();
            n->op = 'n'; n->value = cx{v, 0.0};
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            const std::string word = src_.substr(start, pos_ - start);
            if (word == "x" || word == "y") {
                NodePtr n = std::make_unique<Node>();
                n->op = word[0];
                return n;
            }
            if (word == "i") {
                NodePtr n = std::make_unique<Node>();
                n->op = 'n'; n->value = cx{0.0, 1.0};
                return n;
            }
            if (word == "one") {
                NodePtr n = std::make_unique<Node>();
                n->op = 'n'; n->value = cx{1.0, 0.0};
                return n;
            }
            if (!eat('(')) throw parse_error("weight expression: expected '(' after " + word);
            NodePtr n = std::make_unique<Node>();
            n->op = 'f'; n->fn = word; n->a = parse_sum();
            if (!eat(')')) throw parse_error("weight expression: missing ')' after argument of " + word);
            return n;
        }
        throw parse_error(std::string("weight expression: unexpected character '") + c + "'");
    }

    std::string src_;
    std::size_t pos_ = 0;
    NodePtr root_;
};

namespace detail {

inline const json& require_key(const json& obj, const char* key, const char* what) {
    if (!obj.is_object() || !obj.contains(key))
        throw parse_error(std::string(what) + ": missing key '" + key + "'");
    return obj[key];
}

inline cx complex_from_json(const json& j, const char* what) {
    if (j.is_number()) return cx{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cx{j[0].get<double>(), j[1].get<double>()};
    throw parse_error(std::string(what) + ": expected number or [re, im] pair");
}

inline json complex_to_json(cx z) { return json::array({z.real(), z.imag()}); }

inline std::vector<cx> complex_list(const json& j, const char* what) {
    if (!j.is_array()) throw parse_error(std::string(what) + ": expected array");
    std::vector<cx> out;
    out.reserve(j.size());
    for (const json& e : j) out.push_back(complex_from_json(e, what));
    return out;
}

/// Node list in either explicit form or {"rule": "gauss_legendre", ...}.
inline void grid_axis(const json& j, const json* weights_j, const char* what,
                      std::vector<cx>& nodes, std::vector<cx>& weights) {
    if (j.is_object()) {
        const std::string rule = j.value("rule", "");
        if (rule != "gauss_legendre")
            throw parse_error(std::string(what) + ": unknown node rule '" + rule + "'");
        const std::size_t n = j.value("n", 0);
        const double a = j.value("a", -1.0), b = j.value("b", 1.0);
        std::vector<double> xs, ws;
        gauss_legendre(n, a, b, xs, ws);
        nodes.assign(xs.begin(), xs.end());
        weights.assign(ws.begin(), ws.end());
        return;
    }
    nodes = complex_list(j, what);
    if (weights_j != nullptr)
        weights = complex_list(*weights_j, what);
    else
        weights.assign(nodes.size(), cx{1.0, 0.0});
}

} // namespace detail

/// Measure-spec document: either an explicit atom list
///   { "label": ..., "atoms": [ {"x": [re,im], "y": [re,im], "w": [re,im]}, ... ] }
/// or a product grid
///   { "label": ..., "grid": { "x_nodes": ..., "y_nodes": ..., "weight": "expr" } }
/// where a node list is explicit or {"rule":"gauss_legendre","n":8,"a":-1,"b":1}
/// and optional "x_weights"/"y_weights" override the quadrature weights.
inline Measure measure_from_json(const json& doc) {
    if (!doc.is_object()) throw parse_error("measure document: expected object");
    const std::string label = doc.value("label", "measure");
    if (doc.contains("atoms")) {
        if (!doc["atoms"].is_array()) throw parse_error("measure document: atoms must be an array");
        std::vector<Atom> atoms;
        for (const json& ja : doc["atoms"]) {
            if (!ja.is_object()) throw parse_error("measure document: atom must be an object");
            atoms.push_back({detail::complex_from_json(detail::require_key(ja, "x", "atom"), "atom x"),
                             detail::complex_from_json(detail::require_key(ja, "y", "atom"), "atom y"),
                             detail::complex_from_json(detail::require_key(ja, "w", "atom"), "atom w")});
        }
        return Measure(std::move(atoms), label);
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        std::vector<cx> xn, xw, yn, yw;
        detail::grid_axis(detail::require_key(g, "x_nodes", "grid"),
                          g.contains("x_weights") ? &g["x_weights"] : nullptr, "x_nodes", xn, xw);
        detail::grid_axis(detail::require_key(g, "y_nodes", "grid"),
                          g.contains("y_weights") ? &g["y_weights"] : nullptr, "y_nodes", yn, yw);
        WeightExpr expr(g.value("weight", "1"));
        return build_grid_measure(xn, xw, yn, yw,
                                  [&expr](cx x, cx y) { return expr(x, y); }, label);
    }
    throw parse_error("measure document: need either 'atoms' or 'grid'");
}

inline json measure_to_json(const Measure& m) {
    json atoms = json::array();
    for (const Atom& a : m.atoms())
        atoms.push_back({{"x", detail::complex_to_json(a.x)},
                         {"y", detail::complex_to_json(a.y)},
                         {"w", detail::complex_to_json(a.w)}});
    return json{{"label", m.label()}, {"atoms", atoms}};
}

/// Insertion-spec document:
///   { "N": n, "xi": [[re,im],...], "zeta": [...], "eta": [...], "mu": [...] }
/// with absent families read as empty.
inline InsertionSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) throw parse_error("insertion document: expected object");
    InsertionSpec s;
    if (!doc.contains("N") || !doc["N"].is_number_integer())
        throw parse_error("insertion document: integer N required");
    s.N = doc["N"].get<int>();
    if (doc.contains("xi")) s.xi = detail::complex_list(doc["xi"], "xi");
    if (doc.contains("zeta")) s.zeta = detail::complex_list(doc["zeta"], "zeta");
    if (doc.contains("eta")) s.eta = detail::complex_list(doc["eta"], "eta");
    if (doc.contains("mu")) s.mu = detail::complex_list(doc["mu"], "mu");
    return s;
}

inline json spec_to_json(const InsertionSpec& s) {
    auto fam = [](const std::vector<cx>& v) {
        json a = json::array();
        for (cx p : v) a.push_back(detail::complex_to_json(p));
        return a;
    };
    return json{{"N", s.N}, {"xi", fam(s.xi)}, {"zeta", fam(s.zeta)},
                {"eta", fam(s.eta)}, {"mu", fam(s.mu)}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw parse_error("malformed JSON in " + path + ": " + e.what());
    }
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open file for writing: " + path);
    out << text;
}

} // namespace ratsym
