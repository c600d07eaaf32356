import { describe, expect, it } from "vitest";

import { MessageEncoder, decodeServerLine } from "../src/protocol.js";

describe("MessageEncoder", () => {
  it("wraps messages with monotone seq and the session token", () => {
    const enc = new MessageEncoder("web-1");
    const hello = JSON.parse(enc.hello());
    expect(hello).toMatchObject({ kind: "hello", seq: 1, session: "web-1", body: { protocol: 1 } });
    const input = JSON.parse(
      enc.input({ buttons: { LT: "down" }, ls: { x: 0, y: 1 }, rs: { x: 0, y: 0 }, tick: 5 })
    );
    expect(input.seq).toBe(2);
    expect(input.body.buttons).toEqual({ LT: "down" });
    const ctl = JSON.parse(enc.control("step", { ticks: 4 }));
    expect(ctl.seq).toBe(3);
    expect(ctl.body).toEqual({ op: "step", ticks: 4 });
  });
});

describe("decodeServerLine", () => {
  it("parses server messages and rejects junk", () => {
    const msg = decodeServerLine('{"body":{"acked":2},"kind":"ack","seq":9,"session":"s"}');
    expect(msg.kind).toBe("ack");
    expect(() => decodeServerLine('"just a string"')).toThrow();
  });
});
