#include "ontomesh/text.hpp"

#include <algorithm>
#include <cctype>

namespace ontomesh {

static bool ascii_alnum(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

static char ascii_lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::string normalize_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (unsigned char c : label) {
        if (c >= 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (ascii_alnum(c)) {
            out.push_back(ascii_lower(c));
        }
    }
    return out;
}

std::vector<std::string> split_label_tokens(std::string_view label) {
    std::vector<std::string> tokens;
    std::string cur;
    unsigned char prev = 0;
    for (unsigned char c : label) {
        bool boundary = false;
        if (c < 0x80 && !ascii_alnum(c)) {
            boundary = true;
        } else if (prev != 0 && prev < 0x80 && c < 0x80 &&
                   std::islower(prev) && std::isupper(c)) {
            boundary = true;
        }
        if (boundary && !cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
        if (c >= 0x80) {
            cur.push_back(static_cast<char>(c));
        } else if (ascii_alnum(c)) {
            cur.push_back(ascii_lower(c));
        }
        prev = c;
    }
    if (!cur.empty()) {
        tokens.push_back(cur);
    }
    return tokens;
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) {
        std::swap(a, b);
    }
    // a is the shorter string; one rolling row suffices.
    std::vector<std::size_t> row(a.size() + 1);
    for (std::size_t i = 0; i <= a.size(); ++i) {
        row[i] = i;
    }
    for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t diag = row[0];
        row[0] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            std::size_t next = std::min({row[i] + 1, row[i - 1] + 1, diag + cost});
            diag = row[i];
            row[i] = next;
        }
    }
    return row[a.size()];
}

} // namespace ontomesh
