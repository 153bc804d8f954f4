import { describe, expect, it } from "vitest";

import { POLL_INTERVAL_MS, TriggerController } from "../src/triggers.js";

describe("snapshot triggers", () => {
  it("polls once per interval while the buffer is dirty", () => {
    const triggers = new TriggerController();
    triggers.onEdit("SELECT 1", [0, 8]);
    expect(triggers.tick(1000)).toBeNull(); // interval not yet elapsed
    const snapshot = triggers.tick(POLL_INTERVAL_MS);
    expect(snapshot?.trigger).toBe("poll");
    expect(snapshot?.text).toBe("SELECT 1");
    expect(triggers.tick(2 * POLL_INTERVAL_MS)).toBeNull(); // clean buffer
  });

  it("sends an immediate snapshot on ENTER", () => {
    const triggers = new TriggerController();
    triggers.onEdit("SELECT 1", [0, 8]);
    const snapshot = triggers.onEnter(100);
    expect(snapshot.trigger).toBe("enter");
    expect(snapshot.seq).toBe(1);
  });

  it("two quick ENTERs on an empty line escalate to double_enter", () => {
    const triggers = new TriggerController();
    triggers.onEdit("SELECT 1\n", [1, 0]);
    expect(triggers.onEnter(100).trigger).toBe("enter");
    expect(triggers.onEnter(400).trigger).toBe("double_enter");
  });

  it("slow or mid-line ENTERs stay plain", () => {
    const triggers = new TriggerController();
    triggers.onEdit("SELECT 1\n", [1, 0]);
    triggers.onEnter(100);
    expect(triggers.onEnter(5000).trigger).toBe("enter"); // too slow
    triggers.onEdit("SELECT 1\nWHERE x", [1, 7]);
    triggers.onEnter(5100);
    expect(triggers.onEnter(5300).trigger).toBe("enter"); // line not empty
  });

  it("seq increases monotonically across triggers", () => {
    const triggers = new TriggerController();
    triggers.onEdit("a", [0, 1]);
    const first = triggers.onEnter(0);
    triggers.onEdit("ab", [0, 2]);
    const second = triggers.tick(POLL_INTERVAL_MS * 2);
    expect(second && second.seq > first.seq).toBe(true);
  });
});
