#include "fiberdd/xstate.hpp"

#include <array>
#include <charconv>
#include <optional>
#include <sstream>

namespace fiberdd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

}  // namespace

std::complex<double> parse_complex(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (c != ' ' && c != '\t') text.push_back(c);
    auto fail = [&] { return std::invalid_argument("not a complex number: '" + raw + "'"); };
    if (text.empty()) throw fail();
    if (text.back() != 'i') {
        const auto re = parse_real(text);
        if (!re) throw fail();
        return {*re, 0.0};
    }
    text.pop_back();
    // Split at the last sign that is not the leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? "0" : text.substr(0, split);
    std::string im_part = split == std::string::npos ? text : text.substr(split);
    if (im_part.empty() || im_part == "+" || im_part == "-") im_part += "1";
    const auto re = parse_real(re_part);
    const auto im = parse_real(im_part);
    if (!re || !im) throw fail();
    return {*re, *im};
}

TwoQubitXState parse_xstate(std::istream& in) {
    static const std::array<const char*, 6> keys = {"rho11", "rho22", "rho33",
                                                    "rho44", "rho14", "rho23"};
    std::array<bool, 6> seen{};
    TwoQubitXState s;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        auto where = [&] { return "state file line " + std::to_string(line_no) + " ('" + trim(line) + "'): "; };
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(where() + "expected key=value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        std::size_t idx = keys.size();
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (key == keys[k]) idx = k;
        if (idx == keys.size()) throw std::invalid_argument(where() + "unknown key '" + key + "'");
        if (seen[idx]) throw std::invalid_argument(where() + "duplicate key '" + key + "'");
        seen[idx] = true;
        try {
            if (idx < 4) {
                const auto v = parse_real(value);
                if (!v) throw std::invalid_argument("not a real number: '" + value + "'");
                s.diag[idx] = *v;
            } else {
                (idx == 4 ? s.outer : s.inner) = parse_complex(value);
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where() + e.what());
        }
    }
    for (std::size_t k = 0; k < keys.size(); ++k)
        if (!seen[k]) throw std::invalid_argument(std::string("state file: missing key '") + keys[k] + "'");
    const auto violations = validate_state(s);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "state file: invalid state:";
        for (const auto& v : violations) os << " [" << v.check << " violated by " << v.margin << "]";
        throw std::invalid_argument(os.str());
    }
    return s;
}

}  // namespace fiberdd
