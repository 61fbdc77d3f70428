// PGM/PPM reader and writer (ASCII P2/P3 and binary P5/P6, 8- or 16-bit).

#include <cctype>
#include <fstream>
#include <string>

#include "sfm/datagen.hpp"
#include "sfm/errors.hpp"

namespace sfm::datagen {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const std::string& path) {
  skip_separators(in);
  long v;
  if (!(in >> v) || v < 0) throw InvalidInput(path + ": malformed PNM header");
  return v;
}

} // namespace

GridImage load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);

  char p, kind;
  in.get(p);
  in.get(kind);
  if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6'))
    throw InvalidInput(path + ": not a P2/P3/P5/P6 PNM file");
  const bool color = (kind == '3' || kind == '6');
  const bool binary = (kind == '5' || kind == '6');

  GridImage img;
  img.width = static_cast<int>(read_header_int(in, path));
  img.height = static_cast<int>(read_header_int(in, path));
  const long maxval = read_header_int(in, path);
  if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535)
    throw InvalidInput(path + ": unsupported PNM dimensions or maxval");
  img.channels = color ? 3 : 1;

  const size_t count =
      static_cast<size_t>(img.width) * img.height * img.channels;
  img.values.resize(count);

  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    in.get();
    const int bytes = maxval > 255 ? 2 : 1;
    std::string raster(count * bytes, '\0');
    in.read(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (static_cast<size_t>(in.gcount()) != raster.size())
      throw InvalidInput(path + ": truncated PNM raster");
    for (size_t i = 0; i < count; ++i) {
      unsigned v = static_cast<unsigned char>(raster[i * bytes]);
      if (bytes == 2)
        v = (v << 8) | static_cast<unsigned char>(raster[i * bytes + 1]);
      img.values[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  } else {
    for (size_t i = 0; i < count; ++i) {
      long v = read_header_int(in, path);
      if (v > maxval) throw InvalidInput(path + ": sample exceeds maxval");
      img.values[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return img;
}

void save_pgm(const GridImage& image, const std::string& path) {
  if (image.channels != 1)
    throw PreconditionViolated("save_pgm writes grayscale images only");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path + " for writing");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::string raster;
  raster.reserve(image.values.size());
  for (double v : image.values) {
    int q = static_cast<int>(v * 255.0 + 0.5);
    raster.push_back(static_cast<char>(q < 0 ? 0 : (q > 255 ? 255 : q)));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

} // namespace sfm::datagen
