/** Snapshot triggers: a poll every 5 s, an immediate snapshot on ENTER, and
 * double_enter when two ENTERs land within the threshold (the second one on
 * an empty line, i.e. the user hit ENTER twice in a row). */

import type { SnapshotMessage, Trigger } from "./protocol.js";

export const POLL_INTERVAL_MS = 5000;
export const DOUBLE_ENTER_MS = 600;

export class TriggerController {
  private seq = 0;
  private text = "";
  private cursor: [number, number] = [0, 0];
  private lastEnterAt: number | null = null;
  private lastPollAt = 0;
  private dirtySincePoll = false;

  /** Buffer changed; returns nothing (snapshots flow from ticks/ENTER). */
  onEdit(text: string, cursor: [number, number]): void {
    this.text = text;
    this.cursor = cursor;
    this.dirtySincePoll = true;
  }

  /** ENTER pressed at `now` (ms). Returns the snapshot to send. */
  onEnter(now: number): SnapshotMessage {
    const isDouble =
      this.lastEnterAt !== null &&
      now - this.lastEnterAt <= DOUBLE_ENTER_MS &&
      this.currentLineEmpty();
    this.lastEnterAt = now;
    this.lastPollAt = now;
    this.dirtySincePoll = false;
    return this.snapshot(isDouble ? "double_enter" : "enter");
  }

  /** Periodic tick; returns a poll snapshot when 5 s elapsed since the last
   * send and the buffer changed in between. */
  tick(now: number): SnapshotMessage | null {
    if (now - this.lastPollAt < POLL_INTERVAL_MS || !this.dirtySincePoll) {
      return null;
    }
    this.lastPollAt = now;
    this.dirtySincePoll = false;
    return this.snapshot("poll");
  }

  currentSeq(): number {
    return this.seq;
  }

  private currentLineEmpty(): boolean {
    const line = this.text.split("\n")[this.cursor[0]];
    return line === undefined || line.trim() === "";
  }

  private snapshot(trigger: Trigger): SnapshotMessage {
    this.seq += 1;
    return {
      type: "snapshot",
      text: this.text,
      cursor: this.cursor,
      trigger,
      seq: this.seq,
    };
  }
}
