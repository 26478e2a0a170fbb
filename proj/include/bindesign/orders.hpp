#pragma once
// Order file parsing and writing. One record per line:
//   order_id<TAB>l,w,h;l,w,h;...
// Blank lines and lines starting with '#' are skipped.

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "bindesign/model.hpp"

namespace bindesign {

struct ParseError : std::runtime_error {
    int line_number;
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_number(line) {}
};

namespace detail {

inline int parse_positive_int(const std::string& text, int line) {
    if (text.empty()) throw ParseError(line, "empty dimension");
    long value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw ParseError(line, "malformed dimension '" + text + "'");
        value = value * 10 + (c - '0');
        if (value > Bounds::kMaxSideLen) throw ParseError(line, "dimension out of range");
    }
    if (value < 1) throw ParseError(line, "dimensions must be positive");
    return static_cast<int>(value);
}

}  // namespace detail

inline std::vector<Order> read_orders(std::istream& is) {
    std::vector<Order> orders;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    int line_number = 0;
    while (std::getline(is, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw ParseError(line_number, "expected 'id<TAB>items'");
        Order order;
        order.id = line.substr(0, tab);
        if (!seen_ids.insert(order.id).second)
            throw ParseError(line_number, "duplicate order id '" + order.id + "'");
        std::string items_part = line.substr(tab + 1);
        std::stringstream items_stream(items_part);
        std::string triple;
        while (std::getline(items_stream, triple, ';')) {
            std::array<std::string, 3> parts;
            std::size_t part = 0, start = 0;
            for (std::size_t i = 0; i <= triple.size(); ++i) {
                if (i == triple.size() || triple[i] == ',') {
                    if (part >= 3) throw ParseError(line_number, "expected 'l,w,h'");
                    parts[part++] = triple.substr(start, i - start);
                    start = i + 1;
                }
            }
            if (part != 3) throw ParseError(line_number, "expected 'l,w,h'");
            order.items.push_back({detail::parse_positive_int(parts[0], line_number),
                                   detail::parse_positive_int(parts[1], line_number),
                                   detail::parse_positive_int(parts[2], line_number)});
        }
        if (order.items.empty()) throw ParseError(line_number, "order has no items");
        orders.push_back(std::move(order));
    }
    return orders;
}

inline void write_orders(std::ostream& os, std::span<const Order> orders) {
    for (const Order& order : orders) {
        os << order.id << '\t';
        for (std::size_t i = 0; i < order.items.size(); ++i) {
            if (i > 0) os << ';';
            const BoxDims& b = order.items[i];
            os << b.l << ',' << b.w << ',' << b.h;
        }
        os << '\n';
    }
}

// An item fits the bounds in some orientation iff its sorted dims are
// componentwise <= the sorted bounds.
inline bool item_fits_bounds(const BoxDims& item, const Bounds& bounds) {
    std::array<int, 3> a{item.l, item.w, item.h};
    std::array<int, 3> b{bounds.max_l, bounds.max_w, bounds.max_h};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

struct ExcludedOrder {
    std::string id;
    std::string reason;
};

struct IngestResult {
    std::vector<Order> orders;
    std::vector<ExcludedOrder> excluded;
};

// Parses the file and drops orders containing an item that fits the bounds in
// no orientation; with `strict` such orders abort the run instead.
inline IngestResult ingest(const std::string& path, const Bounds& bounds,
                           bool strict = false) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open order file '" + path + "'");
    IngestResult result;
    std::vector<Order> parsed = read_orders(file);
    if (parsed.empty()) throw ParseError(0, "order file '" + path + "' contains no orders");
    for (Order& order : parsed) {
        const BoxDims* bad = nullptr;
        for (const BoxDims& item : order.items) {
            if (!item_fits_bounds(item, bounds)) {
                bad = &item;
                break;
            }
        }
        if (bad == nullptr) {
            result.orders.push_back(std::move(order));
        } else {
            std::string reason = "item " + std::to_string(bad->l) + "x" +
                                 std::to_string(bad->w) + "x" + std::to_string(bad->h) +
                                 " fits the bounds in no orientation";
            if (strict)
                throw std::runtime_error("order " + order.id + ": " + reason);
            result.excluded.push_back({order.id, std::move(reason)});
        }
    }
    if (result.orders.empty())
        throw std::runtime_error("all orders were excluded by the bounds");
    return result;
}

}  // namespace bindesign
