#include "polylearn/matrix_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polylearn::io {

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

// Whitespace tokenizer tracking positions.
class Lexer {
public:
    explicit Lexer(std::istream& in) : in_(in) {}

    bool next(Token& tok) {
        int ch = 0;
        while ((ch = in_.peek()) != EOF && std::isspace(ch)) advance();
        if (ch == EOF) return false;
        tok.text.clear();
        tok.line = line_;
        tok.column = column_;
        while ((ch = in_.peek()) != EOF && !std::isspace(ch)) tok.text.push_back(static_cast<char>(advance()));
        return true;
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    int advance() {
        const int ch = in_.get();
        if (ch == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return ch;
    }

    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

std::size_t parse_size(const Token& tok, const char* what) {
    if (tok.text.empty() || tok.text.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError(tok.line, tok.column, std::string("expected ") + what + ", got '" + tok.text + "'");
    }
    return std::stoull(tok.text);
}

double parse_double(const Token& tok) {
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(tok.line, tok.column, "expected a finite number, got '" + tok.text + "'");
    }
    return v;
}

}  // namespace

std::string format_matrix(const PointMatrix& W) {
    std::ostringstream os;
    os.precision(17);
    os << "dims " << W.dim() << ' ' << W.count() << '\n';
    const Matrix& M = W.matrix();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            if (i) os << ' ';
            os << M(i, j);
        }
        os << '\n';
    }
    return os.str();
}

PointMatrix parse_matrix(std::istream& in) {
    Lexer lex(in);
    Token tok;
    if (!lex.next(tok) || tok.text != "dims") {
        throw ParseError(tok.line ? tok.line : 1, tok.column ? tok.column : 1, "expected header 'dims d n'");
    }
    if (!lex.next(tok)) throw ParseError(lex.line(), lex.column(), "missing d in header");
    const std::size_t d = parse_size(tok, "d");
    if (d == 0) throw ParseError(tok.line, tok.column, "d must be positive");
    if (!lex.next(tok)) throw ParseError(lex.line(), lex.column(), "missing n in header");
    const std::size_t n = parse_size(tok, "n");

    Matrix M(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            if (!lex.next(tok)) {
                throw ParseError(lex.line(), lex.column(),
                                 "unexpected end of input at column " + std::to_string(j) + ", entry " + std::to_string(i));
            }
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(tok);
        }
    }
    if (lex.next(tok)) throw ParseError(tok.line, tok.column, "trailing data '" + tok.text + "'");
    return PointMatrix(std::move(M));
}

PointMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return parse_matrix(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path.string() + ": " + e.detail());
    }
}

void write_matrix(const std::filesystem::path& path, const PointMatrix& W) {
    write_text_atomic(path, format_matrix(W));
}

void write_text_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

}  // namespace polylearn::io
