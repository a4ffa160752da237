#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flowrecon::tick {

/// Milliseconds since midnight, exchange local time.
/// Text form is decimal seconds with up to 3 fractional digits.
struct Timestamp {
    std::int64_t millis{0};

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline Timestamp operator+(Timestamp t, std::int64_t ms) { return {t.millis + ms}; }
inline Timestamp operator-(Timestamp t, std::int64_t ms) { return {t.millis - ms}; }
inline std::int64_t operator-(Timestamp a, Timestamp b) { return a.millis - b.millis; }

/// Price in integer units of 0.001 currency. Keeps all comparisons exact;
/// every tick size in the feeds is a multiple of 0.001.
struct Price {
    std::int64_t milli{0};

    friend auto operator<=>(const Price&, const Price&) = default;
};

using Qty = std::int64_t;

enum class Side : std::uint8_t { Ask, Bid };

inline char side_char(Side s) { return s == Side::Ask ? 'A' : 'B'; }

struct TradeRecord {
    Timestamp t;
    Price price;
    Qty qty{0};

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

struct QuoteRecord {
    Timestamp t;
    Side side{Side::Ask};
    int level{0};
    Price price;
    Qty qty{0};

    friend bool operator==(const QuoteRecord&, const QuoteRecord&) = default;
};

/// Malformed input line. Carries the 1-based line number and the raw text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line_no, std::string line, const std::string& what);

    std::size_t line_no() const { return line_no_; }
    const std::string& line() const { return line_; }

private:
    std::size_t line_no_;
    std::string line_;
};

// Fixed-point text conversion. Accepts 0-3 fractional digits; more are
// rejected, never rounded. Writers always emit exactly 3.
std::int64_t parse_milli(std::string_view text);
std::string format_milli(std::int64_t value);

Timestamp parse_timestamp(std::string_view text);
Price parse_price(std::string_view text);

std::string format_timestamp(Timestamp t);
std::string format_price(Price p);

/// `timestamp,price,quantity`, no header. File order is preserved.
std::vector<TradeRecord> parse_trades(std::istream& in);
std::vector<TradeRecord> parse_trades(std::string_view text);

/// `timestamp,side,level,price,quantity`, no header. `max_level` bounds the
/// accepted book depth.
std::vector<QuoteRecord> parse_quotes(std::istream& in, int max_level = 10);
std::vector<QuoteRecord> parse_quotes(std::string_view text, int max_level = 10);

void write_trades(std::ostream& out, const std::vector<TradeRecord>& trades);
void write_quotes(std::ostream& out, const std::vector<QuoteRecord>& quotes);

std::string write_trades(const std::vector<TradeRecord>& trades);
std::string write_quotes(const std::vector<QuoteRecord>& quotes);

std::string format_trade(const TradeRecord& r);
std::string format_quote(const QuoteRecord& r);

}  // namespace flowrecon::tick
