/**
 * Minimal PNG codec: 8-bit RGBA, no interlacing, filter type 0 on every
 * scanline, zlib via node's built-in bindings.  The encoder optionally
 * embeds tEXt chunks (used to echo the producing config into the image);
 * the decoder handles exactly what the encoder emits, plus CRC validation,
 * and exists so the tests can assert on pixels without external tooling.
 */

import { deflateSync, inflateSync } from "node:zlib";

export interface Image {
  width: number;
  height: number;
  /** RGBA, row-major, 4 bytes per pixel. */
  data: Uint8Array;
}

export function makeImage(width: number, height: number): Image {
  if (width < 1 || height < 1) {
    throw new Error(`image dimensions must be positive, got ${width}x${height}`);
  }
  const data = new Uint8Array(width * height * 4);
  data.fill(255);
  return { width, height, data };
}

export function setPixel(
  image: Image,
  x: number,
  y: number,
  r: number,
  g: number,
  b: number,
): void {
  const at = (y * image.width + x) * 4;
  image.data[at] = r;
  image.data[at + 1] = g;
  image.data[at + 2] = b;
  image.data[at + 3] = 255;
}

export function getPixel(image: Image, x: number, y: number): [number, number, number] {
  const at = (y * image.width + x) * 4;
  return [image.data[at]!, image.data[at + 1]!, image.data[at + 2]!];
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

export function crc32(bytes: Uint8Array): number {
  let crc = 0xffffffff;
  for (const byte of bytes) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff]! ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "latin1");
  const body = Buffer.concat([head.subarray(4), payload]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head.subarray(0, 4), body, tail]);
}

const SIGNATURE = Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]);

/** Replace non-Latin-1 characters so the text fits a tEXt chunk. */
function toLatin1(value: string): Buffer {
  const escaped = value.replace(/[^\x20-\x7e\n]/g, (c) => {
    const code = c.codePointAt(0)!;
    return `\\u${code.toString(16).padStart(4, "0")}`;
  });
  return Buffer.from(escaped, "latin1");
}

export function encodePng(image: Image, texts: Record<string, string> = {}): Buffer {
  const { width, height, data } = image;
  if (data.length !== width * height * 4) {
    throw new Error("image buffer does not match its dimensions");
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // color type RGBA
  ihdr[10] = 0; // deflate
  ihdr[11] = 0; // adaptive filtering
  ihdr[12] = 0; // no interlace

  const stride = width * 4;
  const raw = Buffer.alloc((stride + 1) * height);
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }

  const pieces = [SIGNATURE, chunk("IHDR", ihdr)];
  for (const [keyword, value] of Object.entries(texts)) {
    if (!/^[\x20-\x7e]{1,79}$/.test(keyword)) {
      throw new Error(`invalid tEXt keyword ${JSON.stringify(keyword)}`);
    }
    pieces.push(
      chunk(
        "tEXt",
        Buffer.concat([Buffer.from(keyword, "latin1"), Buffer.from([0]), toLatin1(value)]),
      ),
    );
  }
  pieces.push(chunk("IDAT", deflateSync(raw, { level: 9 })));
  pieces.push(chunk("IEND", new Uint8Array(0)));
  return Buffer.concat(pieces);
}

export interface DecodedPng {
  image: Image;
  texts: Record<string, string>;
}

export function decodePng(buffer: Buffer): DecodedPng {
  if (!buffer.subarray(0, 8).equals(SIGNATURE)) {
    throw new Error("not a PNG file");
  }
  let at = 8;
  let width = 0;
  let height = 0;
  const idat: Buffer[] = [];
  const texts: Record<string, string> = {};
  while (at < buffer.length) {
    const length = buffer.readUInt32BE(at);
    const type = buffer.subarray(at + 4, at + 8).toString("latin1");
    const payload = buffer.subarray(at + 8, at + 8 + length);
    const stored = buffer.readUInt32BE(at + 8 + length);
    const actual = crc32(buffer.subarray(at + 4, at + 8 + length));
    if (stored !== actual) {
      throw new Error(`CRC mismatch in ${type} chunk`);
    }
    if (type === "IHDR") {
      width = payload.readUInt32BE(0);
      height = payload.readUInt32BE(4);
      if (payload[8] !== 8 || payload[9] !== 6 || payload[12] !== 0) {
        throw new Error("decoder supports only 8-bit non-interlaced RGBA");
      }
    } else if (type === "tEXt") {
      const zero = payload.indexOf(0);
      texts[payload.subarray(0, zero).toString("latin1")] = payload
        .subarray(zero + 1)
        .toString("latin1");
    } else if (type === "IDAT") {
      idat.push(Buffer.from(payload));
    } else if (type === "IEND") {
      break;
    }
    at += 12 + length;
  }
  const raw = inflateSync(Buffer.concat(idat));
  const stride = width * 4;
  const data = new Uint8Array(width * height * 4);
  for (let y = 0; y < height; y++) {
    if (raw[y * (stride + 1)] !== 0) {
      throw new Error("decoder supports only filter type 0");
    }
    data.set(
      raw.subarray(y * (stride + 1) + 1, (y + 1) * (stride + 1)),
      y * stride,
    );
  }
  return { image: { width, height, data }, texts };
}
