#include "gaze360/formats.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gaze360 {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

bool strictly_convex(const Quad& q) {
    for (int i = 0; i < 4; ++i) {
        const Point2 a = q[(i + 1) % 4] - q[i];
        const Point2 b = q[(i + 2) % 4] - q[(i + 1) % 4];
        if (a.x * b.y - a.y * b.x <= 0) return false;
    }
    return true;
}

double parse_double(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        fail(ErrorCode::ParseError, context + ": bad number '" + t + "'");
    return v;
}

long parse_int(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        fail(ErrorCode::ParseError, context + ": bad integer '" + t + "'");
    return v;
}

std::ifstream open_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

std::ofstream create_text(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot create " + path.string());
    return out;
}

// Little-endian primitives; written byte by byte so the files are identical
// on any host.
void put_u16(std::string& buf, uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& buf, float v) { put_u32(buf, std::bit_cast<uint32_t>(v)); }

struct ByteReader {
    std::string data;
    size_t pos = 0;
    std::string context;

    void need(size_t n) const {
        if (pos + n > data.size()) fail(ErrorCode::ParseError, context + ": truncated file");
    }
    uint8_t u8() {
        need(1);
        return static_cast<uint8_t>(data[pos++]);
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint8_t>(data[pos]) | (static_cast<uint16_t>(static_cast<uint8_t>(data[pos + 1])) << 8);
        pos += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(data[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::string rest() { return data.substr(pos); }
};

ByteReader read_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ByteReader{ss.str(), 0, path.string()};
}

void write_binary(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot create " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace

// --- gaze CSV --------------------------------------------------------------

std::vector<FixationRecord> read_gaze_csv(const fs::path& path) {
    auto in = open_text(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestamp,x,y,confidence")
        fail(ErrorCode::ParseError, path.string() + ": expected header 'timestamp,x,y,confidence'");
    std::vector<FixationRecord> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 4) fail(ErrorCode::ParseError, ctx + ": expected 4 columns");
        FixationRecord r;
        r.timestamp = parse_double(cells[0], ctx);
        r.x = parse_double(cells[1], ctx);
        r.y = parse_double(cells[2], ctx);
        r.confidence = parse_double(cells[3], ctx);
        if (r.x < 0 || r.x > 1 || r.y < 0 || r.y > 1)
            fail(ErrorCode::ParseError, ctx + ": coordinates must be normalized to [0,1]");
        if (r.confidence < 0 || r.confidence > 1) fail(ErrorCode::ParseError, ctx + ": confidence must be in [0,1]");
        if (!out.empty() && r.timestamp < out.back().timestamp)
            fail(ErrorCode::ParseError, ctx + ": timestamps must be nondecreasing");
        out.push_back(r);
    }
    return out;
}

void write_gaze_csv(const fs::path& path, const std::vector<FixationRecord>& records) {
    auto out = create_text(path);
    out << "timestamp,x,y,confidence\n";
    for (const auto& r : records)
        out << format_double(r.timestamp) << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
            << format_double(r.confidence) << '\n';
}

// --- detections CSV ----------------------------------------------------------

std::map<int, std::vector<TagDetection>> read_detections_csv(const fs::path& path) {
    auto in = open_text(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "frame,tag_id,x0,y0,x1,y1,x2,y2,x3,y3")
        fail(ErrorCode::ParseError, path.string() + ": bad detections header");
    std::map<int, std::vector<TagDetection>> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 10) fail(ErrorCode::ParseError, ctx + ": expected 10 columns");
        const int frame = static_cast<int>(parse_int(cells[0], ctx));
        TagDetection d;
        d.tag_id = static_cast<int>(parse_int(cells[1], ctx));
        for (int c = 0; c < 4; ++c)
            d.corners[c] = {parse_double(cells[2 + 2 * c], ctx), parse_double(cells[3 + 2 * c], ctx)};
        if (!strictly_convex(d.corners))
            fail(ErrorCode::ParseError, ctx + ": tag corners must form a strictly convex quad");
        out[frame].push_back(d);
    }
    return out;
}

void write_detections_csv(const fs::path& path, const std::vector<FrameDetections>& frames) {
    auto out = create_text(path);
    out << "frame,tag_id,x0,y0,x1,y1,x2,y2,x3,y3\n";
    for (const auto& f : frames)
        for (const auto& d : f.detections) {
            out << f.frame << ',' << d.tag_id;
            for (const auto& c : d.corners) out << ',' << format_double(c.x) << ',' << format_double(c.y);
            out << '\n';
        }
}

// --- calibrated CSV ----------------------------------------------------------

std::vector<CalibratedFixation> read_calibrated_csv(const fs::path& path) {
    auto in = open_text(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "frame,timestamp,x,y,screen_id")
        fail(ErrorCode::ParseError, path.string() + ": bad calibrated-fixation header");
    std::vector<CalibratedFixation> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 5) fail(ErrorCode::ParseError, ctx + ": expected 5 columns");
        CalibratedFixation f;
        f.frame_id = static_cast<int>(parse_int(cells[0], ctx));
        f.timestamp = parse_double(cells[1], ctx);
        f.scene = {parse_double(cells[2], ctx), parse_double(cells[3], ctx)};
        f.screen_id = static_cast<int>(parse_int(cells[4], ctx));
        out.push_back(f);
    }
    return out;
}

void write_calibrated_csv(const fs::path& path, const std::vector<CalibratedFixation>& fixations) {
    auto out = create_text(path);
    out << "frame,timestamp,x,y,screen_id\n";
    for (const auto& f : fixations)
        out << f.frame_id << ',' << format_double(f.timestamp) << ',' << format_double(f.scene.x) << ','
            << format_double(f.scene.y) << ',' << f.screen_id << '\n';
}

// --- generic sectioned config ------------------------------------------------

std::optional<std::string> ConfigSection::get(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

std::vector<ConfigSection> read_config_sections(const fs::path& path) {
    auto in = open_text(path);
    std::vector<ConfigSection> sections;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(ErrorCode::ParseError, path.string() + ": unterminated section header");
            sections.push_back({trim(t.substr(1, t.size() - 2)), {}});
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        if (sections.empty()) sections.push_back({"", {}});
        sections.back().entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return sections;
}

// --- layout config -------------------------------------------------------

namespace {

Quad parse_quad(const std::string& text, const std::string& ctx) {
    const auto parts = split(trim(text), ' ');
    std::vector<std::string> corners;
    for (const auto& p : parts)
        if (!trim(p).empty()) corners.push_back(trim(p));
    if (corners.size() != 4) fail(ErrorCode::ParseError, ctx + ": quad needs 4 'x,y' corners");
    Quad q;
    for (int i = 0; i < 4; ++i) {
        const auto xy = split(corners[i], ',');
        if (xy.size() != 2) fail(ErrorCode::ParseError, ctx + ": corner must be 'x,y'");
        q[i] = {parse_double(xy[0], ctx), parse_double(xy[1], ctx)};
    }
    return q;
}

std::string quad_to_string(const Quad& q) {
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (i) out += ' ';
        out += format_double(q[i].x) + ',' + format_double(q[i].y);
    }
    return out;
}

}  // namespace

ScreenLayout read_layout(const fs::path& path) {
    ScreenLayout layout;
    for (const auto& section : read_config_sections(path)) {
        if (section.name == "eyetracker") {
            for (const auto& [key, value] : section.entries) {
                if (key == "width") layout.et_width = parse_double(value, path.string());
                else if (key == "height") layout.et_height = parse_double(value, path.string());
                else fail(ErrorCode::ParseError, path.string() + ": unknown layout key '" + key + "'");
            }
            continue;
        }
        if (section.name.rfind("screen", 0) != 0)
            fail(ErrorCode::ParseError, path.string() + ": unknown section [" + section.name + "]");
        ScreenSpec screen;
        screen.screen_id = static_cast<int>(parse_int(section.name.substr(6), path.string() + " screen id"));
        for (const auto& [key, value] : section.entries) {
            if (key == "role") {
                screen.role = screen_role_from_string(value);
            } else if (key == "scene_quad") {
                screen.scene_quad = parse_quad(value, path.string());
            } else if (key.rfind("tag ", 0) == 0) {
                const int tag_id = static_cast<int>(parse_int(key.substr(4), path.string() + " tag id"));
                screen.tags[tag_id] = parse_quad(value, path.string());
            } else {
                fail(ErrorCode::ParseError, path.string() + ": unknown layout key '" + key + "'");
            }
        }
        layout.screens.push_back(std::move(screen));
    }
    layout.validate();
    return layout;
}

void write_layout(const fs::path& path, const ScreenLayout& layout) {
    auto out = create_text(path);
    out << "[eyetracker]\n";
    out << "width = " << format_double(layout.et_width) << '\n';
    out << "height = " << format_double(layout.et_height) << '\n';
    for (const auto& s : layout.screens) {
        out << "\n[screen " << s.screen_id << "]\n";
        out << "role = " << to_string(s.role) << '\n';
        out << "scene_quad = " << quad_to_string(s.scene_quad) << '\n';
        for (const auto& [tag_id, quad] : s.tags) out << "tag " << tag_id << " = " << quad_to_string(quad) << '\n';
    }
}

// --- AGZ1 ------------------------------------------------------------------

void write_agz(const fs::path& path, const AttentionMap& map) {
    std::string buf;
    buf.reserve(12 + map.grid.size() * 4);
    buf += "AGZ1";
    put_u32(buf, static_cast<uint32_t>(map.grid.width));
    put_u32(buf, static_cast<uint32_t>(map.grid.height));
    for (double v : map.grid.values) put_f32(buf, static_cast<float>(v));
    write_binary(path, buf);
}

AttentionMap read_agz(const fs::path& path) {
    ByteReader r = read_binary(path);
    r.need(4);
    if (r.data.compare(0, 4, "AGZ1") != 0) fail(ErrorCode::ParseError, path.string() + ": bad AGZ1 magic");
    r.pos = 4;
    const uint32_t w = r.u32();
    const uint32_t h = r.u32();
    if (w == 0 || h == 0 || static_cast<uint64_t>(w) * h > (1u << 28))
        fail(ErrorCode::ParseError, path.string() + ": implausible AGZ1 dimensions");
    AttentionMap map;
    map.grid = FloatGrid(static_cast<int>(w), static_cast<int>(h), 0.0);
    double sum = 0.0;
    for (auto& v : map.grid.values) {
        v = static_cast<double>(r.f32());
        sum += v;
    }
    map.valid = std::abs(sum - 1.0) <= kNormalizationTolerance;
    return map;
}

// --- AGM1 ------------------------------------------------------------------

namespace {

std::string agm_header(int width, int height, uint8_t kind) {
    std::string buf;
    buf += "AGM1";
    put_u32(buf, static_cast<uint32_t>(width));
    put_u32(buf, static_cast<uint32_t>(height));
    buf.push_back(static_cast<char>(kind));
    return buf;
}

ByteReader open_agm(const fs::path& path, uint8_t expected_kind, uint32_t& w, uint32_t& h) {
    ByteReader r = read_binary(path);
    r.need(4);
    if (r.data.compare(0, 4, "AGM1") != 0) fail(ErrorCode::ParseError, path.string() + ": bad AGM1 magic");
    r.pos = 4;
    w = r.u32();
    h = r.u32();
    const uint8_t kind = r.u8();
    if (w == 0 || h == 0 || static_cast<uint64_t>(w) * h > (1u << 28))
        fail(ErrorCode::ParseError, path.string() + ": implausible AGM1 dimensions");
    if (kind != expected_kind)
        fail(ErrorCode::ParseError, path.string() + ": AGM1 kind " + std::to_string(kind) + ", expected " +
                                        std::to_string(expected_kind));
    return r;
}

}  // namespace

void write_agm_semantic(const fs::path& path, const SemanticMask& mask) {
    std::string buf = agm_header(mask.class_ids.width, mask.class_ids.height, 0);
    for (uint16_t v : mask.class_ids.values) put_u16(buf, v);
    write_binary(path, buf);
}

void write_agm_instance(const fs::path& path, const InstanceMask& mask) {
    mask.validate();
    std::string buf = agm_header(mask.ids.width, mask.ids.height, 1);
    for (uint16_t v : mask.ids.values) put_u16(buf, v);
    for (const auto& [id, cls] : mask.class_of) buf += std::to_string(id) + ',' + std::to_string(cls) + '\n';
    write_binary(path, buf);
}

SemanticMask read_agm_semantic(const fs::path& path) {
    uint32_t w = 0, h = 0;
    ByteReader r = open_agm(path, 0, w, h);
    SemanticMask mask;
    mask.class_ids = IdGrid(static_cast<int>(w), static_cast<int>(h), 0);
    for (auto& v : mask.class_ids.values) v = r.u16();
    return mask;
}

InstanceMask read_agm_instance(const fs::path& path) {
    uint32_t w = 0, h = 0;
    ByteReader r = open_agm(path, 1, w, h);
    InstanceMask mask;
    mask.ids = IdGrid(static_cast<int>(w), static_cast<int>(h), 0);
    for (auto& v : mask.ids.values) v = r.u16();
    std::istringstream table(r.rest());
    std::string line;
    while (std::getline(table, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(trim(line), ',');
        if (cells.size() != 2) fail(ErrorCode::ParseError, path.string() + ": bad instance table row '" + line + "'");
        const long id = parse_int(cells[0], path.string());
        const long cls = parse_int(cells[1], path.string());
        mask.class_of[static_cast<uint16_t>(id)] = static_cast<uint16_t>(cls);
    }
    mask.validate();
    return mask;
}

// --- session manifest --------------------------------------------------------

SessionManifest read_session_manifest(const fs::path& path) {
    auto in = open_text(path);
    SessionManifest m;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("frame|", 0) == 0) {
            const auto cells = split(t, '|');
            if (cells.size() != 5) fail(ErrorCode::ParseError, ctx + ": frame record needs 5 '|' fields");
            FrameEntry f;
            f.frame_id = static_cast<int>(parse_int(cells[1], ctx));
            const auto views = split(cells[2], ';');
            if (views.size() != 5) fail(ErrorCode::ParseError, ctx + ": expected exactly 5 view paths");
            for (int i = 0; i < 5; ++i) f.view_paths[i] = trim(views[i]);
            const auto span = split(cells[3], ':');
            if (span.size() != 2) fail(ErrorCode::ParseError, ctx + ": gaze span must be 'begin:end'");
            f.gaze_begin = parse_double(span[0], ctx);
            f.gaze_end = parse_double(span[1], ctx);
            f.detections_path = trim(cells[4]);
            m.frames.push_back(std::move(f));
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos) fail(ErrorCode::ParseError, ctx + ": expected key = value or frame record");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "session_id") m.session_id = value;
        else if (key == "driver_id") m.driver_id = value;
        else if (key == "town") m.town = static_cast<int>(parse_int(value, ctx));
        else if (key == "scenario_class") m.scenario_class = value;
        else if (key == "weather") m.weather = value;
        else if (key == "fps") m.fps = parse_double(value, ctx);
        else if (key == "gaze_log") m.gaze_log = value;
        else fail(ErrorCode::ParseError, ctx + ": unknown manifest key '" + key + "'");
    }
    m.validate();
    return m;
}

void write_session_manifest(const fs::path& path, const SessionManifest& m) {
    m.validate();
    auto out = create_text(path);
    out << "session_id = " << m.session_id << '\n';
    out << "driver_id = " << m.driver_id << '\n';
    out << "town = " << m.town << '\n';
    out << "scenario_class = " << m.scenario_class << '\n';
    out << "weather = " << m.weather << '\n';
    out << "fps = " << format_double(m.fps) << '\n';
    out << "gaze_log = " << m.gaze_log << '\n';
    for (const auto& f : m.frames) {
        out << "frame|" << f.frame_id << '|';
        for (int i = 0; i < 5; ++i) out << (i ? ";" : "") << f.view_paths[i];
        out << '|' << format_double(f.gaze_begin) << ':' << format_double(f.gaze_end) << '|' << f.detections_path
            << '\n';
    }
}

// --- frame-file manifest -------------------------------------------------------

std::vector<FrameFile> read_frame_manifest(const fs::path& path) {
    auto in = open_text(path);
    std::vector<FrameFile> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        const auto cells = split(line, '\t');
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 2 && cells.size() != 3) fail(ErrorCode::ParseError, ctx + ": expected 2 or 3 tab fields");
        FrameFile f;
        f.frame_id = static_cast<int>(parse_int(cells[0], ctx));
        f.path = trim(cells[1]);
        if (cells.size() == 3) {
            const std::string flag = trim(cells[2]);
            if (flag == "valid") f.valid = true;
            else if (flag == "invalid") f.valid = false;
            else fail(ErrorCode::ParseError, ctx + ": flag must be valid|invalid");
        }
        out.push_back(std::move(f));
    }
    return out;
}

void write_frame_manifest(const fs::path& path, const std::vector<FrameFile>& entries) {
    auto out = create_text(path);
    for (const auto& e : entries)
        out << e.frame_id << '\t' << e.path << '\t' << (e.valid ? "valid" : "invalid") << '\n';
}

// --- eval manifest ---------------------------------------------------------

std::vector<EvalEntry> read_eval_manifest(const fs::path& path) {
    auto in = open_text(path);
    std::vector<EvalEntry> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        std::istringstream ss(t);
        EvalEntry e;
        ss >> e.frame_id;
        std::string token;
        while (ss >> token) {
            const size_t eq = token.find('=');
            if (eq == std::string::npos) fail(ErrorCode::ParseError, ctx + ": expected key=path tokens");
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "sal") e.sal = value;
            else if (key == "fix") e.fix = value;
            else if (key == "seg") e.seg = value;
            else fail(ErrorCode::ParseError, ctx + ": unknown eval key '" + key + "'");
        }
        out.push_back(std::move(e));
    }
    return out;
}

void write_eval_manifest(const fs::path& path, const std::vector<EvalEntry>& entries) {
    auto out = create_text(path);
    for (const auto& e : entries) {
        out << e.frame_id;
        if (e.sal) out << " sal=" << *e.sal;
        if (e.fix) out << " fix=" << *e.fix;
        if (e.seg) out << " seg=" << *e.seg;
        out << '\n';
    }
}

// --- class table ---------------------------------------------------------------

ClassTable read_class_table(const fs::path& path) {
    auto in = open_text(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "class_id,name,road_user")
        fail(ErrorCode::ParseError, path.string() + ": expected header 'class_id,name,road_user'");
    std::map<uint16_t, std::string> names;
    std::set<uint16_t> road;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (cells.size() != 3) fail(ErrorCode::ParseError, ctx + ": expected 3 columns");
        const auto id = static_cast<uint16_t>(parse_int(cells[0], ctx));
        names[id] = trim(cells[1]);
        const std::string flag = trim(cells[2]);
        if (flag == "1") road.insert(id);
        else if (flag != "0") fail(ErrorCode::ParseError, ctx + ": road_user must be 0 or 1");
    }
    return ClassTable(std::move(names), std::move(road));
}

}  // namespace gaze360
