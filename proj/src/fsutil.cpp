#include "hofnet/fsutil.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hofnet/errors.hpp"

namespace hofnet {

void atomic_write_file(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw FormatError("cannot open for writing: " + tmp);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw FormatError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw FormatError("rename failed: " + path + " (" + ec.message() + ")");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace hofnet
