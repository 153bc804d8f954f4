export * from "./protocol.js";
export * from "./state.js";
export * from "./triggers.js";
export * from "./diff.js";
export * from "./preview.js";
export * from "./dag.js";
export * from "./client.js";
