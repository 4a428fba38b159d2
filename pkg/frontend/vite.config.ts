import { defineConfig } from "vitest/config";

export default defineConfig({
  // served under /ui on the bridge port, so all asset URLs must be relative
  base: "./",
  build: {
    outDir: "dist",
    target: "es2022",
  },
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
  },
});
