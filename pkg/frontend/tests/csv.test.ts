import { describe, expect, it } from "vitest";

import { CsvError, parseEnvelopeCsv } from "../src/csv.js";

const HEADER = "k,size,v_hat,v_bar,fdp_bar_raw,fdp_bar";

describe("parseEnvelopeCsv", () => {
  it("parses the server schema", () => {
    const text = `${HEADER}\n0,0,0,4,0,0\n1,1,0.5,6,6,1\n`;
    const points = parseEnvelopeCsv(text);
    expect(points).toHaveLength(2);
    expect(points[1]).toEqual({
      k: 1, size: 1, v_hat: 0.5, v_bar: 6, fdp_bar_raw: 6, fdp_bar: 1,
    });
  });

  it("round-trips 17-digit floats", () => {
    const value = "0.10000000000000001";
    const points = parseEnvelopeCsv(`${HEADER}\n0,0,${value},4,0,0\n`);
    expect(points[0].v_hat).toBe(Number(value));
  });

  it("accepts a header-only document as an empty curve", () => {
    expect(parseEnvelopeCsv(`${HEADER}\n`)).toEqual([]);
  });

  it("rejects a header mismatch with line 1", () => {
    expect(() => parseEnvelopeCsv("a,b,c\n")).toThrowError(CsvError);
    try {
      parseEnvelopeCsv("a,b,c\n");
    } catch (err) {
      expect((err as CsvError).line).toBe(1);
    }
  });

  it("rejects short rows and bad numbers with their line", () => {
    expect(() => parseEnvelopeCsv(`${HEADER}\n0,0,0\n`)).toThrowError(/line 2/);
    expect(() => parseEnvelopeCsv(`${HEADER}\n0,0,zzz,4,0,0\n`)).toThrowError(
      /line 2/,
    );
  });

  it("rejects an empty document", () => {
    expect(() => parseEnvelopeCsv("")).toThrowError(CsvError);
  });
});
