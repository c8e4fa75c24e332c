#include "qualimeter/qmdl.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <vector>

namespace qualimeter::qmdl {

namespace {

enum class Tok { Ident, Number, String, LBrace, RBrace, Colon, Comma, End };

struct Token {
    Tok kind;
    std::string text;   // ident text or decoded string content
    double number = 0;
    SourceSpan span;
};

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.span = {line_, col_};
        if (pos_ >= text_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = text_[pos_];
        if (c == '{') { advance(); t.kind = Tok::LBrace; return t; }
        if (c == '}') { advance(); t.kind = Tok::RBrace; return t; }
        if (c == ':') { advance(); t.kind = Tok::Colon; return t; }
        if (c == ',') { advance(); t.kind = Tok::Comma; return t; }
        if (c == '"') return lex_string(t);
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+' || c == '.') && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))
            return lex_number(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return lex_ident(t);
        throw Error(Errc::SyntaxError,
                    span_msg(t.span, std::string("unexpected character '") + c + "'"),
                    t.span);
    }

    static std::string span_msg(SourceSpan s, const std::string& msg) {
        return "line " + std::to_string(s.line) + ", column " +
               std::to_string(s.column) + ": " + msg;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    Token lex_string(Token t) {
        t.kind = Tok::String;
        advance(); // opening quote
        std::string out;
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n')
                throw Error(Errc::SyntaxError,
                            span_msg(t.span, "unterminated string"), t.span);
            char c = text_[pos_];
            advance();
            if (c == '"') break;
            if (c == '\\') {
                if (pos_ >= text_.size())
                    throw Error(Errc::SyntaxError,
                                span_msg(t.span, "unterminated string"), t.span);
                char e = text_[pos_];
                advance();
                switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default:
                    throw Error(Errc::SyntaxError,
                                span_msg(t.span, std::string("bad escape '\\") +
                                                     e + "'"),
                                t.span);
                }
            } else {
                out += c;
            }
        }
        t.text = std::move(out);
        return t;
    }

    Token lex_number(Token t) {
        t.kind = Tok::Number;
        size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+') advance();
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
            advance();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            advance();
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            advance();
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
                advance();
            if (pos_ >= text_.size() ||
                !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw Error(Errc::SyntaxError,
                            span_msg(t.span, "malformed exponent"), t.span);
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
        }
        std::string slice(text_.substr(start, pos_ - start));
        t.text = slice;
        t.number = std::strtod(slice.c_str(), nullptr);
        if (!std::isfinite(t.number))
            throw Error(Errc::SyntaxError,
                        span_msg(t.span, "number out of range"), t.span);
        return t;
    }

    Token lex_ident(Token t) {
        t.kind = Tok::Ident;
        size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                c == '-')
                advance();
            else
                break;
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        return t;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { cur_ = lex_.next(); }

    QualityModel parse_model() {
        expect_kw("model");
        ModelAttributes attrs;
        Token id = expect(Tok::String, "model id");
        if (!valid_name(id.text))
            throw semantic(id.span, "model id must match [A-Za-z0-9_-]+");
        attrs.id = id.text;
        expect(Tok::LBrace, "'{'");
        parse_header(attrs);
        Characteristic root = parse_characteristic(attrs.id);
        if (at_kw("aggregation")) {
            bump();
            Token op = expect(Tok::Ident, "aggregation operator");
            attrs.aggregation = agg_from(op);
        }
        expect(Tok::RBrace, "'}'");
        expect(Tok::End, "end of input");
        return build_model(attrs, std::move(root));
    }

private:
    void parse_header(ModelAttributes& attrs) {
        attrs.purpose = purpose_from(header_ident("purpose"));
        QemAttributes qem;
        qem.assessment_method = method_from(header_ident("qem_method"));
        qem.information_source = source_from(header_ident("qem_source"));
        attrs.qem = qem;
        attrs.organization = org_from(header_ident("organization"));
        if (at_kw("ruleset")) {
            bump();
            expect(Tok::Colon, "':'");
            attrs.ruleset_ref = expect(Tok::Ident, "ruleset id").text;
        }
        if (at_kw("derives_from")) {
            bump();
            expect(Tok::Colon, "':'");
            attrs.lineage.push_back(expect(Tok::Ident, "model id").text);
            while (cur_.kind == Tok::Comma) {
                bump();
                attrs.lineage.push_back(expect(Tok::Ident, "model id").text);
            }
        }
        if (at_kw("context")) {
            bump();
            expect(Tok::Colon, "':'");
            attrs.context = expect(Tok::String, "context string").text;
        }
    }

    Characteristic parse_characteristic(const std::string& parent) {
        expect_kw("characteristic");
        Characteristic node;
        Token name = expect(Tok::String, "characteristic name");
        if (!valid_name(name.text))
            throw semantic(name.span,
                           "characteristic name must match [A-Za-z0-9_-]+");
        node.name = name.text;
        expect_kw("weight");
        Token w = expect(Tok::Number, "weight");
        if (w.number <= 0.0)
            throw Error(Errc::NonPositiveWeight,
                        Lexer::span_msg(w.span, "weight of '" + node.name +
                                                    "' must be > 0"),
                        w.span);
        node.weight = w.number;
        expect(Tok::LBrace, "'{'");
        if (at_kw("characteristic")) {
            while (at_kw("characteristic")) {
                Token child_tok = cur_;
                Characteristic child = parse_characteristic(node.name);
                for (const auto& c : node.children)
                    if (c.name == child.name)
                        throw Error(Errc::DuplicateSiblingName,
                                    Lexer::span_msg(child_tok.span,
                                                    "duplicate sibling '" +
                                                        child.name + "' under '" +
                                                        node.name + "'"),
                                    child_tok.span);
                node.children.push_back(std::move(child));
            }
        } else if (at_kw("metric")) {
            while (at_kw("metric")) node.metrics.push_back(parse_metric(node));
        }
        expect(Tok::RBrace, "'}'");
        (void)parent;
        return node;
    }

    MetricSpec parse_metric(const Characteristic& owner) {
        expect_kw("metric");
        MetricSpec m;
        Token name = expect(Tok::String, "metric name");
        if (!valid_name(name.text))
            throw semantic(name.span, "metric name must match [A-Za-z0-9_-]+");
        for (const auto& prev : owner.metrics)
            if (prev.name == name.text)
                throw Error(Errc::DuplicateSiblingName,
                            Lexer::span_msg(name.span, "duplicate metric '" +
                                                           name.text + "'"),
                            name.span);
        m.name = name.text;
        expect_kw("scale");
        m.scale = scale_from(expect(Tok::Ident, "scale"));
        expect_kw("unit");
        m.unit = expect(Tok::String, "unit").text;
        expect_kw("direction");
        m.direction = direction_from(expect(Tok::Ident, "direction"));
        expect(Tok::LBrace, "'{'");
        expect_kw("normalize");
        expect_kw("linear");
        expect_kw("from");
        m.from_raw = expect(Tok::Number, "number").number;
        expect_kw("to");
        Token to = expect(Tok::Number, "number");
        m.to_raw = to.number;
        if (m.from_raw == m.to_raw)
            throw semantic(to.span, "normalization endpoints must differ");
        if (m.scale == Scale::Nominal)
            throw semantic(name.span,
                           "nominal scale admits no linear normalization");
        if (at_kw("thresholds")) {
            Token th = cur_;
            bump();
            ThresholdSet t;
            expect_kw("reject");
            t.reject = expect(Tok::Number, "number").number;
            expect_kw("accept");
            t.accept = expect(Tok::Number, "number").number;
            expect_kw("target");
            t.target = expect(Tok::Number, "number").number;
            if (at_kw("reference")) {
                bump();
                t.reference = expect(Tok::Number, "number").number;
            }
            try {
                validate_thresholds(t);
            } catch (const Error& e) {
                throw Error(e.code(), Lexer::span_msg(th.span, e.what()),
                            th.span);
            }
            m.thresholds = t;
        }
        expect(Tok::RBrace, "'}'");
        return m;
    }

    // --- enum decoding, SemanticError at the offending token ---

    Token header_ident(const char* key) {
        expect_kw(key);
        expect(Tok::Colon, "':'");
        return expect(Tok::Ident, "value");
    }

    Purpose purpose_from(const Token& t) {
        if (t.text == "definition") return Purpose::Definition;
        if (t.text == "assessment") return Purpose::Assessment;
        if (t.text == "prediction") return Purpose::Prediction;
        if (t.text == "multi-purpose") return Purpose::MultiPurpose;
        throw semantic(t.span, "unknown purpose '" + t.text + "'");
    }

    AssessmentMethod method_from(const Token& t) {
        if (t.text == "rigorous") return AssessmentMethod::Rigorous;
        if (t.text == "short-cut") return AssessmentMethod::ShortCut;
        if (t.text == "approximate") return AssessmentMethod::Approximate;
        throw semantic(t.span, "unknown qem_method '" + t.text + "'");
    }

    InformationSource source_from(const Token& t) {
        if (t.text == "expert") return InformationSource::Expert;
        if (t.text == "non-expert") return InformationSource::NonExpert;
        if (t.text == "hybrid") return InformationSource::Hybrid;
        throw semantic(t.span, "unknown qem_source '" + t.text + "'");
    }

    Organization org_from(const Token& t) {
        if (t.text == "hierarchical") return Organization::Hierarchical;
        if (t.text == "meta-model") return Organization::MetaModel;
        if (t.text == "statistical-implicit")
            return Organization::StatisticalImplicit;
        throw semantic(t.span, "unknown organization '" + t.text + "'");
    }

    Scale scale_from(const Token& t) {
        if (t.text == "nominal") return Scale::Nominal;
        if (t.text == "ordinal") return Scale::Ordinal;
        if (t.text == "interval") return Scale::Interval;
        if (t.text == "ratio") return Scale::Ratio;
        throw semantic(t.span, "unknown scale '" + t.text + "'");
    }

    Direction direction_from(const Token& t) {
        if (t.text == "higher-better") return Direction::HigherBetter;
        if (t.text == "lower-better") return Direction::LowerBetter;
        throw semantic(t.span, "unknown direction '" + t.text + "'");
    }

    AggOp agg_from(const Token& t) {
        if (t.text == "weighted-arithmetic-mean")
            return AggOp::WeightedArithmeticMean;
        if (t.text == "weighted-geometric-mean")
            return AggOp::WeightedGeometricMean;
        if (t.text == "weighted-harmonic-mean")
            return AggOp::WeightedHarmonicMean;
        if (t.text == "weighted-median") return AggOp::WeightedMedian;
        if (t.text == "min") return AggOp::Min;
        if (t.text == "max") return AggOp::Max;
        throw semantic(t.span, "unknown aggregation operator '" + t.text + "'");
    }

    Error semantic(SourceSpan span, const std::string& msg) {
        return Error(Errc::SemanticError, Lexer::span_msg(span, msg), span);
    }

    // --- token plumbing ---

    bool at_kw(const char* kw) const {
        return cur_.kind == Tok::Ident && cur_.text == kw;
    }

    void expect_kw(const char* kw) {
        if (!at_kw(kw))
            throw Error(Errc::SyntaxError,
                        Lexer::span_msg(cur_.span,
                                        std::string("expected '") + kw +
                                            "', got " + describe(cur_)),
                        cur_.span);
        bump();
    }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind)
            throw Error(Errc::SyntaxError,
                        Lexer::span_msg(cur_.span, std::string("expected ") +
                                                       what + ", got " +
                                                       describe(cur_)),
                        cur_.span);
        Token t = cur_;
        bump();
        return t;
    }

    std::string describe(const Token& t) const {
        if (t.kind == Tok::Ident) return "'" + t.text + "'";
        return tok_name(t.kind);
    }

    void bump() { cur_ = lex_.next(); }

    Lexer lex_;
    Token cur_;
};

} // namespace

QualityModel parse(std::string_view text) {
    Parser p(text);
    try {
        return p.parse_model();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(Errc::SyntaxError, e.what(), SourceSpan{1, 1});
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    std::string s(buf);
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        size_t last = s.find_last_not_of('0');
        if (last == dot) last = dot - 1;
        s.erase(last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

void write_metric(std::ostream& os, const MetricSpec& m, int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    os << pad << "metric " << quote(m.name) << " scale " << scale_name(m.scale)
       << " unit " << quote(m.unit) << " direction "
       << direction_name(m.direction) << " {\n";
    os << pad << "  normalize linear from " << format_number(m.from_raw)
       << " to " << format_number(m.to_raw) << "\n";
    if (m.thresholds) {
        const auto& t = *m.thresholds;
        os << pad << "  thresholds reject " << format_number(t.reject)
           << " accept " << format_number(t.accept) << " target "
           << format_number(t.target);
        if (t.reference) os << " reference " << format_number(*t.reference);
        os << "\n";
    }
    os << pad << "}\n";
}

void write_characteristic(std::ostream& os, const Characteristic& node,
                          int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    os << pad << "characteristic " << quote(node.name) << " weight "
       << format_number(node.weight);
    if (node.children.empty() && node.metrics.empty()) {
        os << " {}\n";
        return;
    }
    os << " {\n";
    for (const auto& c : node.children) write_characteristic(os, c, depth + 1);
    for (const auto& m : node.metrics) write_metric(os, m, depth + 1);
    os << pad << "}\n";
}

} // namespace

std::string serialize(const QualityModel& model) {
    std::ostringstream os;
    os << "model " << quote(model.id) << " {\n";
    os << "  purpose: " << purpose_name(model.purpose) << "\n";
    os << "  qem_method: " << assessment_method_name(model.qem.assessment_method)
       << "\n";
    os << "  qem_source: "
       << information_source_name(model.qem.information_source) << "\n";
    os << "  organization: " << organization_name(model.organization) << "\n";
    os << "  ruleset: " << model.ruleset_ref << "\n";
    if (!model.lineage.empty()) {
        os << "  derives_from: ";
        for (size_t i = 0; i < model.lineage.size(); ++i) {
            if (i) os << ", ";
            os << model.lineage[i];
        }
        os << "\n";
    }
    if (!model.context.empty()) os << "  context: " << quote(model.context) << "\n";
    write_characteristic(os, model.root, 1);
    os << "  aggregation " << agg_op_name(model.aggregation) << "\n";
    os << "}\n";
    return os.str();
}

namespace {

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

bool metrics_equal(const MetricSpec& a, const MetricSpec& b, double tol) {
    if (a.name != b.name || a.scale != b.scale || a.unit != b.unit ||
        a.direction != b.direction)
        return false;
    if (!close(a.from_raw, b.from_raw, tol) || !close(a.to_raw, b.to_raw, tol))
        return false;
    if (a.thresholds.has_value() != b.thresholds.has_value()) return false;
    if (a.thresholds) {
        const auto& ta = *a.thresholds;
        const auto& tb = *b.thresholds;
        if (!close(ta.reject, tb.reject, tol) ||
            !close(ta.accept, tb.accept, tol) ||
            !close(ta.target, tb.target, tol))
            return false;
        if (ta.reference.has_value() != tb.reference.has_value()) return false;
        if (ta.reference && !close(*ta.reference, *tb.reference, tol))
            return false;
    }
    return true;
}

bool trees_equal(const Characteristic& a, const Characteristic& b, double tol) {
    if (a.name != b.name || !close(a.weight, b.weight, tol)) return false;
    if (a.children.size() != b.children.size() ||
        a.metrics.size() != b.metrics.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!trees_equal(a.children[i], b.children[i], tol)) return false;
    for (size_t i = 0; i < a.metrics.size(); ++i)
        if (!metrics_equal(a.metrics[i], b.metrics[i], tol)) return false;
    return true;
}

} // namespace

bool structurally_equal(const QualityModel& a, const QualityModel& b,
                        double tol) {
    return a.id == b.id && a.context == b.context && a.purpose == b.purpose &&
           a.qem.assessment_method == b.qem.assessment_method &&
           a.qem.information_source == b.qem.information_source &&
           a.organization == b.organization && a.ruleset_ref == b.ruleset_ref &&
           a.lineage == b.lineage && a.aggregation == b.aggregation &&
           trees_equal(a.root, b.root, tol);
}

} // namespace qualimeter::qmdl
