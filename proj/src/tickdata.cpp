#include "flowrecon/tickdata.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace flowrecon::tick {

ParseError::ParseError(std::size_t line_no, std::string line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what + " [" + line + "]"),
      line_no_(line_no),
      line_(std::move(line)) {}

namespace {

std::int64_t parse_int(std::string_view text, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(text) + "'");
    }
    return v;
}

// Splits a CSV line into exactly `n` fields, no quoting.
void split_fields(std::string_view line, std::string_view* fields, std::size_t n) {
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) throw std::invalid_argument("too few fields");
        fields[i] = line.substr(start, comma - start);
        start = comma + 1;
    }
    if (line.find(',', start) != std::string_view::npos)
        throw std::invalid_argument("too many fields");
    fields[n - 1] = line.substr(start);
}

template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            fn(std::string_view(line));
        } catch (const std::exception& e) {
            throw ParseError(line_no, line, e.what());
        }
    }
}

}  // namespace

std::int64_t parse_milli(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty numeric field");
    bool neg = false;
    std::size_t i = 0;
    if (text[0] == '-') {
        neg = true;
        i = 1;
    }
    std::int64_t whole = 0;
    std::size_t digits = 0;
    for (; i < text.size() && text[i] != '.'; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
        whole = whole * 10 + (text[i] - '0');
        ++digits;
    }
    std::int64_t frac = 0;
    if (i < text.size()) {  // fractional part
        ++i;
        std::size_t nfrac = 0;
        for (; i < text.size(); ++i, ++nfrac) {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
            frac = frac * 10 + (text[i] - '0');
        }
        if (nfrac > 3)
            throw std::invalid_argument("more than 3 decimal places: '" + std::string(text) + "'");
        for (std::size_t k = nfrac; k < 3; ++k) frac *= 10;
        if (nfrac == 0 && digits == 0)
            throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
    } else if (digits == 0) {
        throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
    }
    std::int64_t v = whole * 1000 + frac;
    return neg ? -v : v;
}

std::string format_milli(std::int64_t value) {
    std::string sign;
    if (value < 0) {
        sign = "-";
        value = -value;
    }
    std::string s = std::to_string(value / 1000);
    std::int64_t frac = value % 1000;
    char buf[8];
    std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac));
    return sign + s + buf;
}

Timestamp parse_timestamp(std::string_view text) {
    std::int64_t ms = parse_milli(text);
    if (ms < 0) throw std::invalid_argument("negative timestamp: '" + std::string(text) + "'");
    return Timestamp{ms};
}

Price parse_price(std::string_view text) {
    std::int64_t m = parse_milli(text);
    if (m <= 0) throw std::invalid_argument("non-positive price: '" + std::string(text) + "'");
    return Price{m};
}

std::string format_timestamp(Timestamp t) { return format_milli(t.millis); }
std::string format_price(Price p) { return format_milli(p.milli); }

std::vector<TradeRecord> parse_trades(std::istream& in) {
    std::vector<TradeRecord> out;
    for_each_line(in, [&](std::string_view line) {
        std::string_view f[3];
        split_fields(line, f, 3);
        TradeRecord r;
        r.t = parse_timestamp(f[0]);
        r.price = parse_price(f[1]);
        r.qty = parse_int(f[2], "quantity");
        if (r.qty <= 0) throw std::invalid_argument("non-positive quantity");
        out.push_back(r);
    });
    return out;
}

std::vector<TradeRecord> parse_trades(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_trades(in);
}

std::vector<QuoteRecord> parse_quotes(std::istream& in, int max_level) {
    std::vector<QuoteRecord> out;
    for_each_line(in, [&](std::string_view line) {
        std::string_view f[5];
        split_fields(line, f, 5);
        QuoteRecord r;
        r.t = parse_timestamp(f[0]);
        if (f[1] == "A")
            r.side = Side::Ask;
        else if (f[1] == "B")
            r.side = Side::Bid;
        else
            throw std::invalid_argument("unknown side: '" + std::string(f[1]) + "'");
        r.level = static_cast<int>(parse_int(f[2], "level"));
        if (r.level < 1 || r.level > max_level)
            throw std::invalid_argument("level out of range: " + std::to_string(r.level));
        r.price = parse_price(f[3]);
        r.qty = parse_int(f[4], "quantity");
        if (r.qty < 0) throw std::invalid_argument("negative quantity");
        out.push_back(r);
    });
    return out;
}

std::vector<QuoteRecord> parse_quotes(std::string_view text, int max_level) {
    std::istringstream in{std::string(text)};
    return parse_quotes(in, max_level);
}

std::string format_trade(const TradeRecord& r) {
    return format_timestamp(r.t) + "," + format_price(r.price) + "," + std::to_string(r.qty);
}

std::string format_quote(const QuoteRecord& r) {
    return format_timestamp(r.t) + "," + side_char(r.side) + "," + std::to_string(r.level) + "," +
           format_price(r.price) + "," + std::to_string(r.qty);
}

void write_trades(std::ostream& out, const std::vector<TradeRecord>& trades) {
    for (const auto& r : trades) out << format_trade(r) << '\n';
}

void write_quotes(std::ostream& out, const std::vector<QuoteRecord>& quotes) {
    for (const auto& r : quotes) out << format_quote(r) << '\n';
}

std::string write_trades(const std::vector<TradeRecord>& trades) {
    std::ostringstream out;
    write_trades(out, trades);
    return out.str();
}

std::string write_quotes(const std::vector<QuoteRecord>& quotes) {
    std::ostringstream out;
    write_quotes(out, quotes);
    return out.str();
}

}  // namespace flowrecon::tick
