import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "/ui/",
  build: { outDir: "dist", emptyOutDir: true },
  test: {
    environment: "node",
    testTimeout: 30000,
  },
});
