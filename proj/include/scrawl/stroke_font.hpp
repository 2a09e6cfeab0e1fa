#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scrawl/error.hpp"
#include "scrawl/textutil.hpp"

namespace scrawl {

// Font coordinates are in em units: 1000 units per em, baseline at y=0,
// y growing upward. Rendering flips and scales.
constexpr double kFontUnitsPerEm = 1000.0;

struct FontPoint {
    double x = 0.0;
    double y = 0.0;
};

// One glyph: pen-advance width plus zero or more polyline strokes.
struct Glyph {
    double advance = 0.0;
    std::vector<std::vector<FontPoint>> strokes;
};

// Single-stroke font. File format, one glyph per line:
//
//   a:520: (40,0) (40,340) | (40,250) (160,340)
//
// First byte is the glyph character itself (so `::...` defines ':'),
// then the advance in em units, then `|`-separated point lists. A line
// starting with `@fallback:` defines the glyph drawn for characters the
// table does not cover. `#` lines (unless defining the '#' glyph) and
// blank lines are skipped.
class StrokeFont {
  public:
    static StrokeFont parse(std::istream& in, const std::string& origin) {
        StrokeFont font;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim_view(line).empty()) continue;
            const std::string where = origin + ":" + std::to_string(lineno);
            if (line.rfind("@fallback:", 0) == 0) {
                font.fallback_ = parse_glyph(line.substr(10), where);
            } else if (line.size() >= 2 && line[1] == ':') {
                const auto c = static_cast<unsigned char>(line[0]);
                if (font.glyphs_[c].has_value()) {
                    throw Error(ErrorCode::ParseError, where + ": duplicate glyph '" + line[0] + "'");
                }
                font.glyphs_[c] = parse_glyph(line.substr(2), where);
            } else if (line[0] == '#') {
                continue;
            } else {
                throw Error(ErrorCode::ParseError, where + ": unrecognized font line");
            }
        }
        return font;
    }

    static StrokeFont load(const std::filesystem::path& path) {
        std::ifstream f(path);
        if (!f) throw Error(ErrorCode::FileMissing, "cannot open font file " + path.string());
        return parse(f, path.string());
    }

    bool has(char c) const { return glyphs_[static_cast<unsigned char>(c)].has_value(); }

    // Glyph for c, or the fallback glyph when the table has no entry.
    const Glyph& glyph(char c) const {
        const auto& slot = glyphs_[static_cast<unsigned char>(c)];
        if (slot) return *slot;
        if (fallback_) return *fallback_;
        throw Error(ErrorCode::ParseError,
                    std::string("font has no glyph or fallback for character '") + c + "'");
    }

    bool has_fallback() const { return fallback_.has_value(); }

    const Glyph& fallback_glyph() const {
        if (!fallback_) throw Error(ErrorCode::ParseError, "font defines no fallback glyph");
        return *fallback_;
    }

    size_t glyph_count() const {
        size_t n = 0;
        for (const auto& g : glyphs_) n += g.has_value();
        return n;
    }

  private:
    // `<advance>: (x,y) (x,y) | ...` after the glyph prefix was stripped.
    static Glyph parse_glyph(const std::string& body, const std::string& where) {
        const size_t colon = body.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::ParseError, where + ": missing advance separator");
        }
        Glyph g;
        const std::string adv = std::string(trim_view(body.substr(0, colon)));
        char* end = nullptr;
        g.advance = std::strtod(adv.c_str(), &end);
        if (adv.empty() || end == adv.c_str() || *end != '\0' || g.advance < 0) {
            throw Error(ErrorCode::ParseError, where + ": bad advance '" + adv + "'");
        }
        for (const std::string_view stroke_text : split(body.substr(colon + 1), '|')) {
            std::vector<FontPoint> stroke = parse_points(stroke_text, where);
            if (stroke.empty()) continue; // trailing or doubled separator
            if (stroke.size() < 2) {
                throw Error(ErrorCode::ParseError, where + ": stroke needs at least 2 points");
            }
            g.strokes.push_back(std::move(stroke));
        }
        return g;
    }

    static std::vector<FontPoint> parse_points(std::string_view text, const std::string& where) {
        std::vector<FontPoint> points;
        size_t i = 0;
        while (i < text.size()) {
            if (is_space_byte(text[i])) {
                ++i;
                continue;
            }
            if (text[i] != '(') {
                throw Error(ErrorCode::ParseError, where + ": expected '(' in stroke data");
            }
            const size_t close = text.find(')', i);
            if (close == std::string_view::npos) {
                throw Error(ErrorCode::ParseError, where + ": unterminated point");
            }
            const std::string_view pair = text.substr(i + 1, close - i - 1);
            const size_t comma = pair.find(',');
            if (comma == std::string_view::npos) {
                throw Error(ErrorCode::ParseError, where + ": point needs 'x,y'");
            }
            FontPoint p;
            if (!parse_double(trim_view(pair.substr(0, comma)), p.x) ||
                !parse_double(trim_view(pair.substr(comma + 1)), p.y)) {
                throw Error(ErrorCode::ParseError,
                            where + ": bad coordinate '" + std::string(pair) + "'");
            }
            points.push_back(p);
            i = close + 1;
        }
        return points;
    }

    static bool parse_double(std::string_view sv, double& out) {
        const std::string s(sv);
        char* end = nullptr;
        out = std::strtod(s.c_str(), &end);
        return !s.empty() && end == s.c_str() + s.size();
    }

    std::array<std::optional<Glyph>, 256> glyphs_;
    std::optional<Glyph> fallback_;
};

} // namespace scrawl
