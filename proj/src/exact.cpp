#include "rotlab/exact.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace rotlab {

namespace mp = boost::multiprecision;

int rational_rank(RationalMatrix rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            const Rational f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

long long parse_radical_label(const std::string& label) {
    if (label == "1") return 1;
    std::string digits;
    if (label.rfind("sqrt(", 0) == 0 && label.size() > 6 && label.back() == ')')
        digits = label.substr(5, label.size() - 6);
    else if (label.rfind("sqrt", 0) == 0)
        digits = label.substr(4);
    else
        return 0;
    if (digits.empty() || digits.size() > 15 || digits.find_first_not_of("0123456789") != std::string::npos) return 0;
    const long long n = std::stoll(digits);
    if (n < 2) return 0;
    for (long long d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0) return 0;
    return n;
}

Vec IrrationalVector::approximate() const {
    Vec out = Vec::Zero(dim());
    for (int j = 0; j < basis_size(); ++j) {
        const long long r = parse_radical_label(basis[j]);
        if (r == 0) throw NotApplicable("label '" + basis[j] + "' has no numeric value");
        const double b = std::sqrt(static_cast<double>(r));
        for (int i = 0; i < dim(); ++i) out[i] += static_cast<double>(coeffs[i][j]) * b;
    }
    return out;
}

bool totally_irrational_check(const IrrationalVector& v) { return rational_rank(v.coeffs) == v.dim(); }

IrrationalVector transform(const IntMat& A, const IrrationalVector& v) {
    if (A.cols() != v.dim()) throw std::invalid_argument("transform: dimension mismatch");
    IrrationalVector out;
    out.basis = v.basis;
    out.coeffs.assign(A.rows(), std::vector<Rational>(v.basis_size(), Rational(0)));
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            if (A(i, k) == 0) continue;
            for (int j = 0; j < v.basis_size(); ++j) out.coeffs[i][j] += Rational(A(i, k)) * v.coeffs[k][j];
        }
    return out;
}

IntMat random_unimodular(int n, CounterRng& rng, int moves) {
    IntMat A = IntMat::Identity(n, n);
    if (n < 2) {
        if (n == 1 && rng.integer(0, 1)) A(0, 0) = -1;
        return A;
    }
    for (int m = 0; m < moves; ++m) {
        const int i = static_cast<int>(rng.integer(0, n - 1));
        int j = static_cast<int>(rng.integer(0, n - 2));
        if (j >= i) ++j;
        switch (rng.integer(0, 5)) {
            case 0:
                A.row(i).swap(A.row(j));
                break;
            case 1:
                A.row(i) *= -1;
                break;
            default: {
                long long k = rng.integer(-2, 1);
                if (k >= 0) ++k;
                A.row(i) += k * A.row(j);
            }
        }
    }
    return A;
}

// ---------------------------------------------------------------------------

namespace {

long long largest_prime_factor(long long n) {
    long long best = 1;
    for (long long d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            best = d;
            n /= d;
        }
    return n > 1 ? n : best;
}

}  // namespace

MultiQuadratic::MultiQuadratic(const Rational& r) { add_term(1, r); }

MultiQuadratic MultiQuadratic::sqrt_of(long long squarefree) {
    if (squarefree < 1) throw std::invalid_argument("sqrt_of needs a positive squarefree integer");
    MultiQuadratic m;
    m.add_term(squarefree, Rational(1));
    return m;
}

void MultiQuadratic::add_term(long long key, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MultiQuadratic MultiQuadratic::operator+(const MultiQuadratic& o) const {
    MultiQuadratic r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

MultiQuadratic MultiQuadratic::operator-() const {
    MultiQuadratic r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

MultiQuadratic MultiQuadratic::operator-(const MultiQuadratic& o) const { return *this + (-o); }

MultiQuadratic MultiQuadratic::operator*(const MultiQuadratic& o) const {
    MultiQuadratic r;
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) {
            // sqrt(a) sqrt(b) = g sqrt((a/g)(b/g)) with g = gcd(a, b)
            const long long g = std::gcd(a, b);
            r.add_term((a / g) * (b / g), ca * cb * Rational(g));
        }
    return r;
}

MultiQuadratic MultiQuadratic::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (is_rational()) return MultiQuadratic(Rational(1) / terms_.begin()->second);
    long long p = 1;
    for (const auto& [k, c] : terms_) p = std::max(p, largest_prime_factor(k));
    // x = a + b sqrt(p) with a, b free of sqrt(p); x (a - b sqrt(p)) = a^2 - p b^2.
    MultiQuadratic conj;
    for (const auto& [k, c] : terms_) conj.add_term(k, k % p == 0 ? Rational(-c) : c);
    const MultiQuadratic norm = *this * conj;
    return conj * norm.inverse();
}

MultiQuadratic MultiQuadratic::operator/(const MultiQuadratic& o) const { return *this * o.inverse(); }

Rational MultiQuadratic::rational_part() const {
    auto it = terms_.find(1);
    return it == terms_.end() ? Rational(0) : it->second;
}

double MultiQuadratic::to_double() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += static_cast<double>(c) * std::sqrt(static_cast<double>(k));
    return s;
}

std::string MultiQuadratic::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        if (k != 1) os << "*sqrt" << k;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<MultiQuadratic> to_field(const IrrationalVector& v) {
    std::vector<long long> rad(v.basis_size());
    for (int j = 0; j < v.basis_size(); ++j) {
        rad[j] = parse_radical_label(v.basis[j]);
        if (rad[j] == 0) throw NotApplicable("basis label '" + v.basis[j] + "' is not a square root of an integer");
    }
    std::vector<MultiQuadratic> out(v.dim());
    for (int i = 0; i < v.dim(); ++i)
        for (int j = 0; j < v.basis_size(); ++j)
            if (v.coeffs[i][j] != 0) out[i] = out[i] + MultiQuadratic(v.coeffs[i][j]) * MultiQuadratic::sqrt_of(rad[j]);
    return out;
}

}  // namespace

ObstructionWitness rationality_obstruction(const IrrationalVector& v1, const IrrationalVector& v2) {
    if (v1.dim() != 3 || v2.dim() != 3) throw std::invalid_argument("rationality_obstruction works in R^3");
    if (!totally_irrational_check(v1) || !totally_irrational_check(v2))
        throw PreconditionViolation("both inputs must be totally irrational");
    const auto a = to_field(v1);
    const auto b = to_field(v2);

    ObstructionWitness out;
    const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
    bool solved = false;
    for (const auto& [i, j] : pairs) {
        const MultiQuadratic det = a[i] * b[j] - a[j] * b[i];
        if (det.is_zero()) continue;
        // alpha a_i + beta b_i = 1, alpha a_j + beta b_j = 1
        const MultiQuadratic inv = det.inverse();
        out.alpha = (b[j] - b[i]) * inv;
        out.beta = (a[i] - a[j]) * inv;
        out.components = {i, j};
        solved = true;
        break;
    }
    if (!solved) throw NotIndependent("the two vectors are parallel");

    std::map<long long, int> column;
    for (int i = 0; i < 3; ++i) {
        out.w.push_back(out.alpha * a[i] + out.beta * b[i]);
        for (const auto& [k, c] : out.w.back().terms()) column.emplace(k, 0);
    }
    column.emplace(1, 0);
    int next = 0;
    for (auto& [k, col] : column) {
        col = next++;
        out.witness.basis.push_back(k == 1 ? "1" : "sqrt" + std::to_string(k));
    }
    out.witness.coeffs.assign(3, std::vector<Rational>(column.size(), Rational(0)));
    for (int i = 0; i < 3; ++i)
        for (const auto& [k, c] : out.w[i].terms()) out.witness.coeffs[i][column[k]] = c;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

mp::cpp_int parse_int(const std::string& s, const std::string& where) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
        throw FormatError(where + ": '" + s + "' is not an integer");
    return mp::cpp_int(s[0] == '+' ? s.substr(1) : s);
}

Rational parse_rational(const nlohmann::json& c, const std::string& where) {
    if (c.is_number_integer()) return Rational(c.get<long long>());
    if (c.is_array() && c.size() == 2) {
        auto part = [&](const nlohmann::json& x) {
            if (x.is_number_integer()) return mp::cpp_int(x.get<long long>());
            if (x.is_string()) return parse_int(x.get<std::string>(), where);
            throw FormatError(where + ": rational parts must be integers");
        };
        const mp::cpp_int den = part(c[1]);
        if (den == 0) throw FormatError(where + ": zero denominator");
        return Rational(part(c[0]), den);
    }
    if (c.is_string()) {
        const std::string s = c.get<std::string>();
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(parse_int(s, where));
        const mp::cpp_int den = parse_int(s.substr(slash + 1), where);
        if (den == 0) throw FormatError(where + ": zero denominator");
        return Rational(parse_int(s.substr(0, slash), where), den);
    }
    throw FormatError(where + ": expected an integer, [num, den] or \"num/den\"");
}

nlohmann::json rational_json(const Rational& r) {
    const mp::cpp_int num = mp::numerator(r), den = mp::denominator(r);
    const mp::cpp_int lim = std::numeric_limits<long long>::max();
    if (mp::abs(num) <= lim && den <= lim)
        return nlohmann::json::array({static_cast<long long>(num), static_cast<long long>(den)});
    return num.str() + "/" + den.str();
}

}  // namespace

IrrationalVector irrational_vector_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("irrational vector: expected an object");
    for (const auto& [key, value] : j.items())
        if (key != "basis" && key != "coeffs") throw FormatError("irrational vector: unknown key '" + key + "'");
    if (!j.contains("basis") || !j["basis"].is_array()) throw FormatError("basis: expected an array of labels");
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw FormatError("coeffs: expected an array of rows");
    IrrationalVector v;
    for (const auto& b : j["basis"]) {
        if (!b.is_string()) throw FormatError("basis: labels must be strings");
        v.basis.push_back(b.get<std::string>());
    }
    int i = 0;
    for (const auto& row : j["coeffs"]) {
        const std::string where = "coeffs[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != v.basis.size())
            throw FormatError(where + ": expected " + std::to_string(v.basis.size()) + " coefficients");
        std::vector<Rational> r;
        int k = 0;
        for (const auto& c : row) r.push_back(parse_rational(c, where + "[" + std::to_string(k++) + "]"));
        v.coeffs.push_back(std::move(r));
        ++i;
    }
    return v;
}

nlohmann::json to_json(const IrrationalVector& v) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : v.coeffs) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(rational_json(c));
        rows.push_back(r);
    }
    return {{"basis", v.basis}, {"coeffs", rows}};
}

}  // namespace rotlab
